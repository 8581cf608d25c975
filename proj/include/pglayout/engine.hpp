#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pglayout/graph.hpp"
#include "pglayout/layout.hpp"
#include "pglayout/rng.hpp"

namespace pglayout {

struct LayoutConfig {
    std::uint64_t global_seed = 42;
    std::uint32_t n_iters = 30;
    std::uint32_t threads = 1;
    std::uint32_t batch_size = 32;   // steps sharing one cooling decision
    double zipf_theta = 0.99;
    std::uint64_t zipf_space_max = 1000; // hop-distance window cap
    double eta_min_eps = 0.01;
    std::uint32_t drf = 1; // updates applied per selected pair (1, 2 or 4)
    std::uint32_t srf = 1; // divisor on the per-iteration step budget
};

// Geometrically decaying learning-rate schedule: etas[0] = eta_max,
// etas[n-1] = eta_min, etas[t] = eta_max * exp(-lambda * t).
struct SgdSchedule {
    std::vector<double> etas;
    double eta_max = 0.0;
    double eta_min = 0.0;
    double lambda = 0.0;
};

SgdSchedule make_eta_schedule(double eta_max, double eta_min,
                              std::uint32_t n_iters);

// Schedule for a graph: with weights w = d_ref^-2, eta_max = d_max^2 for
// d_max = longest path (nucleotides) and eta_min = eta_min_eps * d_min^2
// with d_min = 1, so the first sweep saturates every term's step size and
// the last one barely perturbs even the tightest pair.
SgdSchedule make_schedule(const PangenomeGraph& g, const LayoutConfig& cfg);

enum class StepOutcome : std::uint8_t { applied, skipped };

// Moves the two chosen endpoints toward their reference distance:
// mu = min(eta / d_ref^2, 1), delta = mu * (|v_i - v_j| - d_ref) / 2 along the
// unit vector between them; each endpoint absorbs half the correction, so
// mu = 1 lands the pair exactly d_ref apart. Coincident endpoints separate
// along a random direction. d_ref = 0 pairs are skipped untouched.
StepOutcome apply_endpoint_update(Layout& layout, NodeId node_i, Endpoint e_i,
                                  NodeId node_j, Endpoint e_j, double d_ref,
                                  double eta, RngState& rng);

// One full SGD step: weighted step selection (the selected step is n_i), hop
// to n_j (Zipf-distributed hop distance under cooling, uniform otherwise),
// coin-flipped endpoints, then apply_endpoint_update at the nucleotide
// reference distance.
StepOutcome layout_step(const PangenomeGraph& g, Layout& layout, RngState& rng,
                        double eta, bool cooling, const LayoutConfig& cfg);

struct RunStats {
    std::uint64_t primary_steps = 0;
    std::uint64_t updates_attempted = 0;
    std::uint64_t updates_applied = 0;
    std::uint64_t updates_skipped = 0;
    std::uint64_t batches_first_half = 0;
    std::uint64_t batches_first_half_cooling = 0;
    std::uint64_t batches_second_half = 0;
    std::uint64_t batches_second_half_cooling = 0;
};

// Called at each iteration boundary (workers quiescent). Must not mutate.
using IterationCallback = std::function<void(
    std::uint32_t iter, const Layout& layout, double eta, double seconds)>;

// Full layout run: schedule + init + n_iters iterations of
// total_update_steps(g) / srf steps, each applying drf updates. Workers run
// lock-free on the shared layout and synchronize only between iterations;
// threads = 1 is exactly reproducible per seed.
Layout run_layout(const PangenomeGraph& g, const LayoutConfig& cfg,
                  const IterationCallback& on_iteration = {},
                  RunStats* stats = nullptr);

// Update-reuse variant: requires drf in {2, 4} (and srf >= 1); each selected
// pair is re-updated under fresh, previously unused endpoint combinations.
Layout run_layout_reuse(const PangenomeGraph& g, const LayoutConfig& cfg,
                        const IterationCallback& on_iteration = {},
                        RunStats* stats = nullptr);

} // namespace pglayout
