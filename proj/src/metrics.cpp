#include "pglayout/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "pglayout/rng.hpp"

namespace pglayout {

namespace {

constexpr Endpoint kEndpoints[2] = {Endpoint::start, Endpoint::end};

void finish_report(StressReport& r, double sum_sq_dev) {
    if (r.n >= 2)
        r.std_dev = std::sqrt(sum_sq_dev / static_cast<double>(r.n - 1));
    else
        r.std_dev = 0.0;
    const double half =
        r.n > 0 ? 1.96 * r.std_dev / std::sqrt(static_cast<double>(r.n)) : 0.0;
    r.ci_low = r.mean - half;
    r.ci_high = r.mean + half;
}

// Enumerates the defined endpoint-combination terms of one step pair.
template <typename Fn>
void for_each_pair_term(const Path& p, std::uint64_t i, std::uint64_t j,
                        const Layout& layout, Fn&& fn) {
    for (Endpoint e_i : kEndpoints) {
        const std::uint64_t pos_i = path_position(p, i, e_i);
        const Vec2 v_i = layout.get(p.steps[i].node_id, e_i);
        for (Endpoint e_j : kEndpoints) {
            const std::uint64_t pos_j = path_position(p, j, e_j);
            if (pos_i == pos_j) continue;
            const double d_ref =
                static_cast<double>(pos_i > pos_j ? pos_i - pos_j : pos_j - pos_i);
            fn(pair_stress(v_i, layout.get(p.steps[j].node_id, e_j), d_ref));
        }
    }
}

} // namespace

std::string report_tsv(const StressReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.9g\t%llu\t%.9g\t%.9g\t%.9g\t%llu",
                  r.mean, static_cast<unsigned long long>(r.n), r.std_dev,
                  r.ci_low, r.ci_high, static_cast<unsigned long long>(r.skipped));
    return buf;
}

double pair_stress(Vec2 v_i, Vec2 v_j, double d_ref) {
    if (!(d_ref > 0.0))
        throw ZeroReference("pair_stress needs a positive reference distance");
    const double err = ((v_i - v_j).norm() - d_ref) / d_ref;
    return err * err;
}

std::optional<double> step_pair_stress(const Path& path, std::uint64_t i,
                                       std::uint64_t j, const Layout& layout) {
    if (i >= path.steps.size() || j >= path.steps.size())
        throw IndexOutOfRange("step pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") in path '" + path.name +
                              "'");
    double sum = 0.0;
    int count = 0;
    for_each_pair_term(path, i, j, layout, [&](double term) {
        sum += term;
        ++count;
    });
    if (count == 0) return std::nullopt;
    return sum / count;
}

StressReport exact_path_stress(const PangenomeGraph& g, const Layout& layout) {
    StressReport r;
    // Pass 1: mean. Pass 2: recompute each term for the spread (the pair set
    // can be too large to store).
    double sum = 0.0;
    for (const Path& p : g.paths)
        for (std::uint64_t i = 0; i + 1 < p.steps.size(); ++i)
            for (std::uint64_t j = i + 1; j < p.steps.size(); ++j) {
                const auto term = step_pair_stress(p, i, j, layout);
                if (term) {
                    sum += *term;
                    ++r.n;
                } else {
                    ++r.skipped;
                }
            }
    r.mean = r.n > 0 ? sum / static_cast<double>(r.n) : 0.0;

    double sum_sq_dev = 0.0;
    if (r.n >= 2)
        for (const Path& p : g.paths)
            for (std::uint64_t i = 0; i + 1 < p.steps.size(); ++i)
                for (std::uint64_t j = i + 1; j < p.steps.size(); ++j) {
                    const auto term = step_pair_stress(p, i, j, layout);
                    if (term) {
                        const double dev = *term - r.mean;
                        sum_sq_dev += dev * dev;
                    }
                }
    finish_report(r, sum_sq_dev);
    return r;
}

StressReport sampled_path_stress(const PangenomeGraph& g, const Layout& layout,
                                 std::uint64_t seed,
                                 std::uint32_t samples_per_node) {
    if (samples_per_node < 1)
        throw InvalidParameter("samples_per_node must be >= 1");
    StressReport r;
    std::vector<double> terms;

    for (std::size_t pi = 0; pi < g.paths.size(); ++pi) {
        const Path& p = g.paths[pi];
        const std::uint64_t n_steps = p.steps.size();
        if (n_steps < 2) continue;
        RngState rng = seed_worker(seed, stream::sampled_stress + pi);
        const std::uint64_t n_samples = samples_per_node * n_steps;
        for (std::uint64_t s = 0; s < n_samples; ++s) {
            const std::uint64_t i = rng.next_below(n_steps);
            std::uint64_t j;
            do {
                j = rng.next_below(n_steps);
            } while (j == i);
            // On a zero-d_ref combination, keep the pair and redraw only the
            // endpoint coins: every step pair then contributes its average
            // over non-degenerate combinations, matching the exact metric.
            bool kept = false;
            for (int attempt = 0; attempt < 9 && !kept; ++attempt) {
                const Endpoint e_i =
                    rng.flip_coin() ? Endpoint::start : Endpoint::end;
                const Endpoint e_j =
                    rng.flip_coin() ? Endpoint::start : Endpoint::end;
                const std::uint64_t pos_i = path_position(p, i, e_i);
                const std::uint64_t pos_j = path_position(p, j, e_j);
                if (pos_i == pos_j) continue;
                const double d_ref = static_cast<double>(
                    pos_i > pos_j ? pos_i - pos_j : pos_j - pos_i);
                terms.push_back(pair_stress(layout.get(p.steps[i].node_id, e_i),
                                            layout.get(p.steps[j].node_id, e_j),
                                            d_ref));
                kept = true;
            }
            if (!kept) ++r.skipped;
        }
    }

    r.n = terms.size();
    double sum = 0.0;
    for (double t : terms) sum += t;
    r.mean = r.n > 0 ? sum / static_cast<double>(r.n) : 0.0;
    double sum_sq_dev = 0.0;
    for (double t : terms) sum_sq_dev += (t - r.mean) * (t - r.mean);
    finish_report(r, sum_sq_dev);
    return r;
}

CorrelationReport correlation_harness(
    const std::vector<const PangenomeGraph*>& graphs,
    const std::vector<const Layout*>& layouts, std::uint64_t seed,
    std::uint32_t samples_per_node) {
    if (graphs.size() != layouts.size())
        throw CountMismatch("harness got " + std::to_string(graphs.size()) +
                            " graphs but " + std::to_string(layouts.size()) +
                            " layouts");
    constexpr std::uint64_t kExactLimit = 10000;
    CorrelationReport rep;
    rep.points.reserve(graphs.size());
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        if (graphs[k]->total_steps() > kExactLimit)
            throw CorpusTooLarge(
                "graph " + std::to_string(k) + " has " +
                std::to_string(graphs[k]->total_steps()) +
                " steps; the exact metric is quadratic and capped at " +
                std::to_string(kExactLimit));
        const double exact = exact_path_stress(*graphs[k], *layouts[k]).mean;
        const double sampled =
            sampled_path_stress(*graphs[k], *layouts[k], seed + k,
                                samples_per_node)
                .mean;
        rep.points.emplace_back(exact, sampled);
        const double dev =
            std::abs(sampled - exact) / std::max(std::abs(exact), 1e-12);
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, dev);
    }

    const std::size_t n = rep.points.size();
    if (n >= 2) {
        double mx = 0.0, my = 0.0;
        for (auto [x, y] : rep.points) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (auto [x, y] : rep.points) {
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
            sxy += (x - mx) * (y - my);
        }
        if (sxx > 0.0 && syy > 0.0)
            rep.pearson_r = sxy / std::sqrt(sxx * syy);
    }
    return rep;
}

} // namespace pglayout
