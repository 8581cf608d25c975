#include "pglayout/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace pglayout {

namespace {

enum class BubbleType : std::uint8_t { snv, insertion, deletion, none };

// A bubble anchored at backbone position b:
//   snv:       b -> alt -> b+2, alternative to backbone node b+1
//   insertion: b -> ins -> b+1, extra sequence some haplotypes carry
//   deletion:  b -> b+2, skipping backbone node b+1
struct Bubble {
    BubbleType type = BubbleType::none;
    std::uint64_t alt_len = 0; // snv/insertion only
    NodeId alt_id = 0;         // assigned during id layout
};

} // namespace

PangenomeGraph generate_synthetic_pangenome(std::uint64_t seed,
                                            std::uint64_t backbone_nodes,
                                            std::uint32_t n_paths,
                                            double variant_rate) {
    if (backbone_nodes < 2)
        throw InvalidParameter("backbone needs at least 2 nodes");
    if (n_paths < 1) throw InvalidParameter("need at least one path");
    if (!(variant_rate >= 0.0 && variant_rate <= 1.0))
        throw InvalidParameter("variant_rate must lie in [0, 1]");

    RngState rng = seed_worker(seed, stream::synthetic);
    const std::uint64_t B = backbone_nodes;

    // Segment lengths of 8..32 bases: short enough to keep desk-scale graphs
    // cheap, long enough that no reference distance collapses toward zero
    // (tiny d_ref pairs make the relative-error stress arbitrarily spiky).
    std::vector<std::uint64_t> backbone_len(B);
    for (auto& len : backbone_len) len = 8 + rng.next_below(25);

    // Choose bubble sites. At most one bubble per anchor position.
    std::vector<Bubble> site(B);
    for (std::uint64_t b = 0; b < B; ++b) {
        if (rng.next_uniform() >= variant_rate) continue;
        BubbleType feasible[3];
        std::size_t n_feasible = 0;
        if (b + 3 <= B) feasible[n_feasible++] = BubbleType::snv;
        if (b + 2 <= B) feasible[n_feasible++] = BubbleType::insertion;
        if (b + 3 <= B) feasible[n_feasible++] = BubbleType::deletion;
        if (n_feasible == 0) continue;
        Bubble bub;
        bub.type = feasible[rng.next_below(n_feasible)];
        if (bub.type != BubbleType::deletion) bub.alt_len = 8 + rng.next_below(25);
        site[b] = bub;
    }

    // Assign node ids in positional order so id order tracks genomic order:
    // backbone b, then any insertion anchored at b, then any SNV alternative
    // that sits parallel to backbone b+1.
    std::vector<std::uint64_t> lengths;
    std::vector<NodeId> backbone_id(B);
    for (std::uint64_t b = 0; b < B; ++b) {
        backbone_id[b] = static_cast<NodeId>(lengths.size());
        lengths.push_back(backbone_len[b]);
        if (site[b].type == BubbleType::insertion) {
            site[b].alt_id = static_cast<NodeId>(lengths.size());
            lengths.push_back(site[b].alt_len);
        }
        if (b >= 1 && site[b - 1].type == BubbleType::snv) {
            site[b - 1].alt_id = static_cast<NodeId>(lengths.size());
            lengths.push_back(site[b - 1].alt_len);
        }
    }

    std::vector<NamedWalk> walks(n_paths);
    for (std::uint32_t pi = 0; pi < n_paths; ++pi) {
        NamedWalk& walk = walks[pi];
        walk.name = "hap" + std::to_string(pi);
        std::uint64_t b = 0;
        while (b < B) {
            walk.steps.push_back({backbone_id[b], Orientation::forward});
            const Bubble& bub = site[b];
            if (bub.type != BubbleType::none && rng.flip_coin()) {
                switch (bub.type) {
                case BubbleType::snv:
                    walk.steps.push_back({bub.alt_id, Orientation::forward});
                    b += 2;
                    continue;
                case BubbleType::insertion:
                    walk.steps.push_back({bub.alt_id, Orientation::forward});
                    b += 1;
                    continue;
                case BubbleType::deletion:
                    b += 2;
                    continue;
                case BubbleType::none:
                    break;
                }
            }
            b += 1;
        }
    }

    // Edges are exactly the node adjacencies realised by some walk.
    std::vector<std::pair<NodeId, NodeId>> adj;
    for (const NamedWalk& walk : walks)
        for (std::size_t k = 0; k + 1 < walk.steps.size(); ++k)
            adj.emplace_back(walk.steps[k].node, walk.steps[k + 1].node);
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());

    std::vector<Edge> edges;
    edges.reserve(adj.size());
    for (auto [a, b2] : adj)
        edges.push_back(Edge{a, Endpoint::end, b2, Endpoint::start});

    return build_graph(std::move(lengths), std::move(edges), std::move(walks));
}

} // namespace pglayout
