#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pglayout/errors.hpp"
#include "pglayout/rng.hpp"

namespace pglayout {

using NodeId = std::uint32_t;

enum class Orientation : std::uint8_t { forward, reverse };
enum class Endpoint : std::uint8_t { start, end };

// Nodes keep only their sequence length; the layout never needs the bases.
struct NodeRecord {
    std::uint64_t seq_len = 0;
    friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

// Bidirected edge: each side attaches to the start or end of its node.
struct Edge {
    NodeId from = 0;
    Endpoint from_end = Endpoint::end;
    NodeId to = 0;
    Endpoint to_end = Endpoint::start;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// One visit of a path to a node. `offset` is the nucleotide position at which
// the visit begins; `seq_len` caches the node length so position lookups touch
// only this record.
struct PathStep {
    std::uint64_t offset = 0;
    NodeId node_id = 0;
    std::uint32_t seq_len = 0;
    Orientation orient = Orientation::forward;
    friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct Path {
    std::string name;
    std::vector<PathStep> steps;
    std::uint64_t total_len = 0;
    friend bool operator==(const Path&, const Path&) = default;
};

// Input form of a path for build_graph (offsets not yet computed).
struct WalkStep {
    NodeId node = 0;
    Orientation orient = Orientation::forward;
};

struct NamedWalk {
    std::string name;
    std::vector<WalkStep> steps;
};

class PangenomeGraph {
public:
    std::vector<NodeRecord> nodes;
    std::vector<Edge> edges;
    std::vector<Path> paths;

    std::size_t node_count() const { return nodes.size(); }
    std::uint64_t total_steps() const { return total_steps_; }
    std::uint64_t total_nucleotides() const { return total_nucleotides_; }

    // Edges per node; the standard pangenome summary statistic.
    double average_degree() const {
        if (nodes.empty()) return 0.0;
        return static_cast<double>(edges.size()) / static_cast<double>(nodes.size());
    }

    // cum_steps()[k] = number of steps in paths 0..k-1; back() = total_steps().
    const std::vector<std::uint64_t>& cum_steps() const { return cum_steps_; }

    friend PangenomeGraph build_graph(std::vector<std::uint64_t> node_lengths,
                                      std::vector<Edge> edges,
                                      std::vector<NamedWalk> walks);

private:
    std::vector<std::uint64_t> cum_steps_{0};
    std::uint64_t total_steps_ = 0;
    std::uint64_t total_nucleotides_ = 0;
};

// Assembles and validates a graph: computes per-step offsets, per-path totals
// and the cumulative step index used for weighted selection.
PangenomeGraph build_graph(std::vector<std::uint64_t> node_lengths,
                           std::vector<Edge> edges,
                           std::vector<NamedWalk> walks);

// Nucleotide position of one endpoint of one step along its path. A forward
// visit puts the node's start at `offset`; a reverse visit mirrors it.
inline std::uint64_t path_position(const Path& path, std::size_t step_index,
                                   Endpoint endpoint) {
    if (step_index >= path.steps.size())
        throw IndexOutOfRange("step index " + std::to_string(step_index) +
                              " in path '" + path.name + "' with " +
                              std::to_string(path.steps.size()) + " steps");
    const PathStep& st = path.steps[step_index];
    const bool far_side = (st.orient == Orientation::forward)
                              ? (endpoint == Endpoint::end)
                              : (endpoint == Endpoint::start);
    return st.offset + (far_side ? st.seq_len : 0);
}

// Update budget of one SGD iteration: ten times the total path length in steps.
inline std::uint64_t total_update_steps(const PangenomeGraph& g) {
    return 10 * g.total_steps();
}

struct StepSelection {
    std::uint32_t path_index = 0;
    std::uint64_t step_index = 0;
};

// Picks one step uniformly over all steps of all paths, which selects a path
// with probability proportional to its step count. O(log |P|).
inline StepSelection weighted_step_select(RngState& rng, const PangenomeGraph& g) {
    if (g.total_steps() == 0)
        throw EmptyGraph("weighted_step_select on a graph without path steps");
    const std::uint64_t pick = rng.next_below(g.total_steps());
    const auto& cum = g.cum_steps();
    // Largest path index whose cumulative start is <= pick.
    std::size_t lo = 0, hi = cum.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum[mid] <= pick)
            lo = mid;
        else
            hi = mid;
    }
    return {static_cast<std::uint32_t>(lo), pick - cum[lo]};
}

} // namespace pglayout
