#include "pglayout/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace pglayout {

namespace {

constexpr double kCoincidentEps = 1e-9;
constexpr double kPi = 3.14159265358979323846;

void validate_config(const LayoutConfig& cfg) {
    if (cfg.n_iters < 1) throw InvalidParameter("n_iters must be >= 1");
    if (cfg.threads < 1) throw InvalidParameter("threads must be >= 1");
    if (cfg.batch_size < 1) throw InvalidParameter("batch_size must be >= 1");
    if (!(cfg.zipf_theta > 0.0) || !std::isfinite(cfg.zipf_theta))
        throw InvalidParameter("zipf_theta must be positive");
    if (cfg.zipf_space_max < 1)
        throw InvalidParameter("zipf_space_max must be >= 1");
    if (!(cfg.eta_min_eps > 0.0))
        throw InvalidParameter("eta_min_eps must be positive");
    if (cfg.drf != 1 && cfg.drf != 2 && cfg.drf != 4)
        throw InvalidParameter("drf must be 1, 2 or 4");
    if (cfg.srf < 1) throw InvalidParameter("srf must be >= 1");
}

bool has_usable_path(const PangenomeGraph& g) {
    for (const Path& p : g.paths)
        if (p.steps.size() >= 2) return true;
    return false;
}

ZipfParams zipf_params_for(const Path& p, const LayoutConfig& cfg) {
    const std::uint64_t span = p.steps.size() < 2 ? 1 : p.steps.size() - 1;
    return {std::min(span, cfg.zipf_space_max), cfg.zipf_theta};
}

struct PairSelection {
    std::uint32_t path_index = 0;
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    bool valid = false;
};

// Lines 5-10 of the update loop: weighted step selection doubles as n_i; n_j
// is a Zipf-distributed hop away under cooling (draw the hop, then the sign;
// flip direction when it leaves the path, clamp when both sides do), or
// uniform otherwise (one redraw on collision, then give up).
template <typename SamplerFor>
PairSelection select_step_pair(const PangenomeGraph& g, RngState& rng,
                               bool cooling, SamplerFor&& zipf_for) {
    const StepSelection sel = weighted_step_select(rng, g);
    const Path& p = g.paths[sel.path_index];
    const std::int64_t n = static_cast<std::int64_t>(p.steps.size());
    if (n < 2) return {};
    const std::int64_t i = static_cast<std::int64_t>(sel.step_index);
    std::int64_t j;
    if (cooling) {
        const std::int64_t k =
            static_cast<std::int64_t>(zipf_for(sel.path_index).sample(rng));
        const std::int64_t sign = rng.flip_coin() ? 1 : -1;
        j = i + sign * k;
        if (j < 0 || j >= n) {
            j = i - sign * k;
            if (j < 0 || j >= n) j = std::clamp(i + sign * k, std::int64_t{0}, n - 1);
        }
        if (j == i) return {}; // clamped onto itself at a path boundary
    } else {
        j = static_cast<std::int64_t>(rng.next_below(p.steps.size()));
        if (j == i) {
            j = static_cast<std::int64_t>(rng.next_below(p.steps.size()));
            if (j == i) return {};
        }
    }
    return {sel.path_index, static_cast<std::uint64_t>(i),
            static_cast<std::uint64_t>(j), true};
}

double reference_distance(const Path& p, std::uint64_t i, Endpoint e_i,
                          std::uint64_t j, Endpoint e_j) {
    const std::uint64_t a = path_position(p, i, e_i);
    const std::uint64_t b = path_position(p, j, e_j);
    return static_cast<double>(a > b ? a - b : b - a);
}

inline Endpoint coin_endpoint(RngState& rng) {
    return rng.flip_coin() ? Endpoint::start : Endpoint::end;
}

struct WorkerTask {
    const PangenomeGraph* g = nullptr;
    Layout* layout = nullptr;
    const LayoutConfig* cfg = nullptr;
    const std::vector<ZipfSampler>* samplers = nullptr;
};

// One worker's share of one iteration. Steps are processed in batches that
// share a single cooling decision; forced cooling kicks in for the second
// half of the schedule.
void run_worker_steps(const WorkerTask& task, RngState& rng,
                      std::uint64_t n_steps, double eta, bool force_cooling,
                      RunStats& stats) {
    const PangenomeGraph& g = *task.g;
    Layout& layout = *task.layout;
    const LayoutConfig& cfg = *task.cfg;
    const auto zipf_for = [&](std::uint32_t pi) -> const ZipfSampler& {
        return (*task.samplers)[pi];
    };

    bool cooling = false;
    for (std::uint64_t s = 0; s < n_steps; ++s) {
        if (s % cfg.batch_size == 0) {
            cooling = force_cooling || rng.flip_coin();
            if (force_cooling) {
                ++stats.batches_second_half;
                ++stats.batches_second_half_cooling;
            } else {
                ++stats.batches_first_half;
                if (cooling) ++stats.batches_first_half_cooling;
            }
        }
        ++stats.primary_steps;
        stats.updates_attempted += cfg.drf;

        const PairSelection sel = select_step_pair(g, rng, cooling, zipf_for);
        if (!sel.valid) {
            stats.updates_skipped += cfg.drf;
            continue;
        }
        const Path& p = g.paths[sel.path_index];
        const NodeId node_i = p.steps[sel.i].node_id;
        const NodeId node_j = p.steps[sel.j].node_id;

        const Endpoint e_i = coin_endpoint(rng);
        const Endpoint e_j = coin_endpoint(rng);
        StepOutcome out = apply_endpoint_update(
            layout, node_i, e_i, node_j, e_j,
            reference_distance(p, sel.i, e_i, sel.j, e_j), eta, rng);
        if (out == StepOutcome::applied)
            ++stats.updates_applied;
        else
            ++stats.updates_skipped;

        if (cfg.drf > 1) {
            // Re-update the cached pair under endpoint combinations not yet
            // used this step; each extra costs coin flips, not a selection.
            const auto combo_bit = [](Endpoint a, Endpoint b) {
                return 1u << ((a == Endpoint::end ? 2 : 0) |
                              (b == Endpoint::end ? 1 : 0));
            };
            unsigned used = combo_bit(e_i, e_j);
            for (std::uint32_t extra = 1; extra < cfg.drf; ++extra) {
                Endpoint a, b;
                do {
                    a = coin_endpoint(rng);
                    b = coin_endpoint(rng);
                } while (used & combo_bit(a, b));
                used |= combo_bit(a, b);
                out = apply_endpoint_update(
                    layout, node_i, a, node_j, b,
                    reference_distance(p, sel.i, a, sel.j, b), eta, rng);
                if (out == StepOutcome::applied)
                    ++stats.updates_applied;
                else
                    ++stats.updates_skipped;
            }
        }
    }
}

Layout run_layout_impl(const PangenomeGraph& g, const LayoutConfig& cfg,
                       const IterationCallback& on_iteration, RunStats* stats) {
    validate_config(cfg);
    if (g.paths.empty() || !has_usable_path(g))
        throw DegenerateGraph(
            "layout needs at least one path with two or more steps");

    const SgdSchedule schedule = make_schedule(g, cfg);
    Layout layout = init_layout(g, cfg.global_seed);

    std::vector<ZipfSampler> samplers;
    samplers.reserve(g.paths.size());
    for (const Path& p : g.paths)
        samplers.emplace_back(zipf_params_for(p, cfg));

    const std::uint32_t n_workers = cfg.threads;
    std::vector<RngState> rngs;
    rngs.reserve(n_workers);
    for (std::uint32_t w = 0; w < n_workers; ++w)
        rngs.push_back(seed_worker(cfg.global_seed, w));
    std::vector<RunStats> worker_stats(n_workers);

    const WorkerTask task{&g, &layout, &cfg, &samplers};
    const std::uint64_t steps_per_iter = total_update_steps(g) / cfg.srf;

    for (std::uint32_t iter = 0; iter < cfg.n_iters; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        const double eta = schedule.etas[iter];
        const bool force_cooling =
            2ull * iter >= static_cast<std::uint64_t>(cfg.n_iters);

        if (n_workers == 1) {
            run_worker_steps(task, rngs[0], steps_per_iter, eta, force_cooling,
                             worker_stats[0]);
        } else {
            const std::uint64_t share = steps_per_iter / n_workers;
            const std::uint64_t remainder = steps_per_iter % n_workers;
            std::vector<std::jthread> pool;
            pool.reserve(n_workers);
            for (std::uint32_t w = 0; w < n_workers; ++w) {
                const std::uint64_t count = share + (w == 0 ? remainder : 0);
                pool.emplace_back([&, w, count] {
                    run_worker_steps(task, rngs[w], count, eta, force_cooling,
                                     worker_stats[w]);
                });
            }
            pool.clear(); // join
        }

        if (on_iteration) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
            on_iteration(iter, layout, eta, secs);
        }
    }

    if (stats) {
        RunStats total;
        for (const RunStats& ws : worker_stats) {
            total.primary_steps += ws.primary_steps;
            total.updates_attempted += ws.updates_attempted;
            total.updates_applied += ws.updates_applied;
            total.updates_skipped += ws.updates_skipped;
            total.batches_first_half += ws.batches_first_half;
            total.batches_first_half_cooling += ws.batches_first_half_cooling;
            total.batches_second_half += ws.batches_second_half;
            total.batches_second_half_cooling += ws.batches_second_half_cooling;
        }
        *stats = total;
    }
    return layout;
}

} // namespace

SgdSchedule make_eta_schedule(double eta_max, double eta_min,
                              std::uint32_t n_iters) {
    if (n_iters < 1) throw InvalidParameter("schedule needs n_iters >= 1");
    if (!(eta_max > 0.0) || !(eta_min > 0.0) || !(eta_min <= eta_max))
        throw InvalidParameter("schedule needs 0 < eta_min <= eta_max");
    SgdSchedule s;
    s.eta_max = eta_max;
    s.eta_min = eta_min;
    s.lambda = n_iters > 1 ? std::log(eta_max / eta_min) / (n_iters - 1) : 0.0;
    s.etas.reserve(n_iters);
    for (std::uint32_t t = 0; t < n_iters; ++t)
        s.etas.push_back(eta_max * std::exp(-s.lambda * t));
    return s;
}

SgdSchedule make_schedule(const PangenomeGraph& g, const LayoutConfig& cfg) {
    if (g.paths.empty() || !has_usable_path(g))
        throw DegenerateGraph("schedule needs a path pair with d_ref > 0");
    std::uint64_t d_max = 1;
    for (const Path& p : g.paths) d_max = std::max(d_max, p.total_len);
    const double eta_max = static_cast<double>(d_max) * static_cast<double>(d_max);
    const double eta_min = cfg.eta_min_eps; // * d_min^2 with d_min = 1
    return make_eta_schedule(eta_max, eta_min, cfg.n_iters);
}

StepOutcome apply_endpoint_update(Layout& layout, NodeId node_i, Endpoint e_i,
                                  NodeId node_j, Endpoint e_j, double d_ref,
                                  double eta, RngState& rng) {
    if (!(d_ref > 0.0)) return StepOutcome::skipped;

    const double w = 1.0 / (d_ref * d_ref);
    double mu = eta * w;
    if (mu > 1.0) mu = 1.0;

    const Vec2 vi = layout.get(node_i, e_i);
    const Vec2 vj = layout.get(node_j, e_j);
    const double dx = vi.x - vj.x;
    const double dy = vi.y - vj.y;
    const double mag = std::sqrt(dx * dx + dy * dy);

    double ux, uy;
    if (mag < kCoincidentEps) {
        // Coincident endpoints give no direction; jitter one uniformly.
        const double angle = 2.0 * kPi * rng.next_uniform();
        ux = std::cos(angle);
        uy = std::sin(angle);
    } else {
        ux = dx / mag;
        uy = dy / mag;
    }

    const double delta = mu * (mag - d_ref) / 2.0;
    layout.set(node_i, e_i, {vi.x - delta * ux, vi.y - delta * uy});
    layout.set(node_j, e_j, {vj.x + delta * ux, vj.y + delta * uy});
    return StepOutcome::applied;
}

StepOutcome layout_step(const PangenomeGraph& g, Layout& layout, RngState& rng,
                        double eta, bool cooling, const LayoutConfig& cfg) {
    const PairSelection sel = select_step_pair(
        g, rng, cooling,
        [&](std::uint32_t pi) { return ZipfSampler(zipf_params_for(g.paths[pi], cfg)); });
    if (!sel.valid) return StepOutcome::skipped;
    const Path& p = g.paths[sel.path_index];
    const Endpoint e_i = coin_endpoint(rng);
    const Endpoint e_j = coin_endpoint(rng);
    return apply_endpoint_update(layout, p.steps[sel.i].node_id, e_i,
                                 p.steps[sel.j].node_id, e_j,
                                 reference_distance(p, sel.i, e_i, sel.j, e_j),
                                 eta, rng);
}

Layout run_layout(const PangenomeGraph& g, const LayoutConfig& cfg,
                  const IterationCallback& on_iteration, RunStats* stats) {
    return run_layout_impl(g, cfg, on_iteration, stats);
}

Layout run_layout_reuse(const PangenomeGraph& g, const LayoutConfig& cfg,
                        const IterationCallback& on_iteration, RunStats* stats) {
    if (cfg.drf != 2 && cfg.drf != 4)
        throw InvalidParameter("update reuse needs drf of 2 or 4");
    if (cfg.srf < 1) throw InvalidParameter("srf must be >= 1");
    return run_layout_impl(g, cfg, on_iteration, stats);
}

} // namespace pglayout
