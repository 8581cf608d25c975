#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "pglayout/graph.hpp"
#include "pglayout/vec2.hpp"

namespace pglayout {

// One node's visualization segment, packed with its length so an update
// touches a single record. Coordinates are atomic doubles accessed with
// relaxed ordering: concurrent workers may overwrite each other (asynchronous
// updates are tolerated by design) but a scalar read never tears.
struct NodeLayoutRecord {
    std::atomic<double> start_x{0.0};
    std::atomic<double> start_y{0.0};
    std::atomic<double> end_x{0.0};
    std::atomic<double> end_y{0.0};
    std::uint64_t seq_len = 0;
};

class Layout {
public:
    explicit Layout(std::size_t node_count) : recs_(node_count) {}

    explicit Layout(const PangenomeGraph& g) : recs_(g.node_count()) {
        for (std::size_t i = 0; i < recs_.size(); ++i)
            recs_[i].seq_len = g.nodes[i].seq_len;
    }

    std::size_t node_count() const { return recs_.size(); }

    std::uint64_t seq_len(NodeId n) const { return recs_[n].seq_len; }

    Vec2 get(NodeId n, Endpoint e) const {
        const NodeLayoutRecord& r = recs_[n];
        if (e == Endpoint::start)
            return {r.start_x.load(std::memory_order_relaxed),
                    r.start_y.load(std::memory_order_relaxed)};
        return {r.end_x.load(std::memory_order_relaxed),
                r.end_y.load(std::memory_order_relaxed)};
    }

    void set(NodeId n, Endpoint e, Vec2 v) {
        NodeLayoutRecord& r = recs_[n];
        if (e == Endpoint::start) {
            r.start_x.store(v.x, std::memory_order_relaxed);
            r.start_y.store(v.y, std::memory_order_relaxed);
        } else {
            r.end_x.store(v.x, std::memory_order_relaxed);
            r.end_y.store(v.y, std::memory_order_relaxed);
        }
    }

    // Flat copy (sx, sy, ex, ey per node), for serialization and comparisons.
    std::vector<double> snapshot() const {
        std::vector<double> out;
        out.reserve(4 * recs_.size());
        for (const NodeLayoutRecord& r : recs_) {
            out.push_back(r.start_x.load(std::memory_order_relaxed));
            out.push_back(r.start_y.load(std::memory_order_relaxed));
            out.push_back(r.end_x.load(std::memory_order_relaxed));
            out.push_back(r.end_y.load(std::memory_order_relaxed));
        }
        return out;
    }

    Layout clone() const {
        Layout c(recs_.size());
        for (std::size_t i = 0; i < recs_.size(); ++i) {
            c.recs_[i].seq_len = recs_[i].seq_len;
            c.set(static_cast<NodeId>(i), Endpoint::start,
                  get(static_cast<NodeId>(i), Endpoint::start));
            c.set(static_cast<NodeId>(i), Endpoint::end,
                  get(static_cast<NodeId>(i), Endpoint::end));
        }
        return c;
    }

    bool all_finite() const;

private:
    std::vector<NodeLayoutRecord> recs_;
};

// Deterministic starting layout: x spans the cumulative nucleotide offsets in
// node-id order (so id order roughly unrolls the genome), y is uniform noise
// in +-sqrt(total nucleotides). Per node the y draws are start then end.
Layout init_layout(const PangenomeGraph& g, std::uint64_t seed);

} // namespace pglayout
