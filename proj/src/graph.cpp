#include "pglayout/graph.hpp"

#include <limits>

namespace pglayout {

PangenomeGraph build_graph(std::vector<std::uint64_t> node_lengths,
                           std::vector<Edge> edges,
                           std::vector<NamedWalk> walks) {
    PangenomeGraph g;
    g.nodes.reserve(node_lengths.size());
    for (std::size_t i = 0; i < node_lengths.size(); ++i) {
        if (node_lengths[i] == 0)
            throw InvalidParameter("node " + std::to_string(i) +
                                   " has zero sequence length");
        g.nodes.push_back(NodeRecord{node_lengths[i]});
        g.total_nucleotides_ += node_lengths[i];
    }

    const auto check_node = [&](NodeId id, const char* what) {
        if (id >= g.nodes.size())
            throw UnknownNode(std::string(what) + " references node " +
                              std::to_string(id) + " but the graph has " +
                              std::to_string(g.nodes.size()) + " nodes");
    };

    for (const Edge& e : edges) {
        check_node(e.from, "edge");
        check_node(e.to, "edge");
    }
    g.edges = std::move(edges);

    g.paths.reserve(walks.size());
    g.cum_steps_.assign(1, 0);
    for (NamedWalk& walk : walks) {
        if (walk.steps.empty())
            throw EmptyPath("path '" + walk.name + "' has no steps");
        Path p;
        p.name = std::move(walk.name);
        p.steps.reserve(walk.steps.size());
        std::uint64_t offset = 0;
        for (const WalkStep& ws : walk.steps) {
            check_node(ws.node, "path");
            const std::uint64_t len = g.nodes[ws.node].seq_len;
            if (len > std::numeric_limits<std::uint32_t>::max())
                throw InvalidParameter("node " + std::to_string(ws.node) +
                                       " is longer than a step record can hold");
            p.steps.push_back(PathStep{offset, ws.node,
                                       static_cast<std::uint32_t>(len), ws.orient});
            offset += len;
        }
        p.total_len = offset;
        g.total_steps_ += p.steps.size();
        g.cum_steps_.push_back(g.total_steps_);
        g.paths.push_back(std::move(p));
    }

    return g;
}

} // namespace pglayout
