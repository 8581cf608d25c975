#include "pglayout/layout.hpp"

#include <cmath>

#include "pglayout/rng.hpp"

namespace pglayout {

bool Layout::all_finite() const {
    for (std::size_t i = 0; i < recs_.size(); ++i) {
        const Vec2 s = get(static_cast<NodeId>(i), Endpoint::start);
        const Vec2 e = get(static_cast<NodeId>(i), Endpoint::end);
        if (!std::isfinite(s.x) || !std::isfinite(s.y) ||
            !std::isfinite(e.x) || !std::isfinite(e.y))
            return false;
    }
    return true;
}

Layout init_layout(const PangenomeGraph& g, std::uint64_t seed) {
    Layout layout(g);
    RngState rng = seed_worker(seed, stream::init_layout);
    const double amp = std::sqrt(static_cast<double>(g.total_nucleotides()));
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const NodeId n = static_cast<NodeId>(i);
        const double x0 = static_cast<double>(offset);
        const double x1 = static_cast<double>(offset + g.nodes[i].seq_len);
        layout.set(n, Endpoint::start, {x0, (2.0 * rng.next_uniform() - 1.0) * amp});
        layout.set(n, Endpoint::end, {x1, (2.0 * rng.next_uniform() - 1.0) * amp});
        offset += g.nodes[i].seq_len;
    }
    return layout;
}

} // namespace pglayout
