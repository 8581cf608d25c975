#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pglayout/graph.hpp"
#include "pglayout/layout.hpp"

namespace pglayout {

struct StressReport {
    double mean = 0.0;
    std::uint64_t n = 0; // terms that entered the mean
    double std_dev = 0.0;
    double ci_low = 0.0;  // 95% interval: mean +- 1.96 * std_dev / sqrt(n)
    double ci_high = 0.0;
    std::uint64_t skipped = 0; // degenerate terms excluded
};

// mean <tab> n <tab> std_dev <tab> ci_low <tab> ci_high <tab> skipped
std::string report_tsv(const StressReport& r);

// Relative squared deviation of the drawn distance from the nucleotide
// reference distance: ((|v_i - v_j| - d_ref) / d_ref)^2.
double pair_stress(Vec2 v_i, Vec2 v_j, double d_ref);

// Stress of one step pair, averaged over the (up to four) endpoint
// combinations with a nonzero reference distance; empty when all four are
// degenerate (e.g. i == j with matching endpoints).
std::optional<double> step_pair_stress(const Path& path, std::uint64_t i,
                                       std::uint64_t j, const Layout& layout);

// Full path stress: every unordered step pair of every path, each pair
// contributing its endpoint-combination average. Quadratic in path length --
// fine up to roughly 1e5 total steps, hopeless beyond (use the sampled form).
// `skipped` counts pairs whose four combinations were all degenerate.
StressReport exact_path_stress(const PangenomeGraph& g, const Layout& layout);

// Monte Carlo estimate: per path, samples_per_node * |p| samples of (distinct
// uniform step pair, coin-flipped endpoint combination). A zero-d_ref draw
// keeps its pair and redraws the endpoint coins up to 8 times before the
// sample is abandoned (counted in `skipped`), so each pair is estimated by
// its average over non-degenerate combinations -- the same weighting the
// exact metric uses. The standard deviation comes from a second pass over
// the stored terms. Deterministic in (seed, samples_per_node); paths draw
// from independent streams, so the result does not depend on traversal order.
StressReport sampled_path_stress(const PangenomeGraph& g, const Layout& layout,
                                 std::uint64_t seed,
                                 std::uint32_t samples_per_node = 100);

struct CorrelationReport {
    std::optional<double> pearson_r; // empty when either series has no variance
    double max_relative_deviation = 0.0;
    std::vector<std::pair<double, double>> points; // (exact, sampled) means
};

// Runs exact and sampled stress over a corpus of (graph, layout) pairs and
// correlates the two. Guards: equal counts, and each graph small enough
// (total steps <= 1e4) for the exact metric.
CorrelationReport correlation_harness(
    const std::vector<const PangenomeGraph*>& graphs,
    const std::vector<const Layout*>& layouts, std::uint64_t seed,
    std::uint32_t samples_per_node = 100);

} // namespace pglayout
