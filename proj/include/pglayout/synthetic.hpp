#pragma once

#include <cstdint>

#include "pglayout/graph.hpp"

namespace pglayout {

// Builds a variation-graph-shaped test input: a linear backbone with SNV,
// insertion and deletion bubbles sprinkled at `variant_rate` per position.
// Every path walks the whole backbone and detours through each bubble with
// probability one half. Deterministic in (seed, parameters).
//
// Requires backbone_nodes >= 2, n_paths >= 1, 0 <= variant_rate <= 1.
PangenomeGraph generate_synthetic_pangenome(std::uint64_t seed,
                                            std::uint64_t backbone_nodes,
                                            std::uint32_t n_paths,
                                            double variant_rate);

} // namespace pglayout
