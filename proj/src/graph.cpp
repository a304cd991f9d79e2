// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/graph.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace slc {

namespace {

std::vector<std::pair<NodeId, NodeId>> sanitize_edges(
    NodeId n, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw input_error("edge endpoint out of range: (" + std::to_string(u) + "," +
                              std::to_string(v) + ") with n=" + std::to_string(n));
        }
        if (u == v) {
            throw input_error("self-loop rejected at node " + std::to_string(u));
        }
        out.emplace_back(u, v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

ManipulationGraph::ManipulationGraph(NodeId n,
                                     std::span<const std::pair<NodeId, NodeId>> edges)
    : n_(n) {
    auto clean = sanitize_edges(n, edges);
    edge_count_ = clean.size();

    std::vector<std::uint32_t> out_deg(n, 0), in_deg(n, 0);
    for (const auto& [u, v] : clean) {
        ++out_deg[u];
        ++in_deg[v];
    }
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) {
        out_offsets_[i + 1] = out_offsets_[i] + out_deg[i];
        in_offsets_[i + 1] = in_offsets_[i] + in_deg[i];
    }
    out_flat_.resize(clean.size());
    in_flat_.resize(clean.size());
    std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const auto& [u, v] : clean) {
        out_flat_[out_pos[u]++] = v;
        in_flat_[in_pos[v]++] = u;
    }
    // clean is sorted by (u,v), so out lists are ascending; in lists are
    // filled in source order which is ascending per target as well.
    for (NodeId v = 0; v < n; ++v) {
        std::sort(in_flat_.begin() + in_offsets_[v], in_flat_.begin() + in_offsets_[v + 1]);
    }
}

ManipulationGraph::ManipulationGraph(NodeId n,
                                     std::initializer_list<std::pair<NodeId, NodeId>> edges)
    : ManipulationGraph(n, std::span<const std::pair<NodeId, NodeId>>(edges.begin(), edges.size())) {}

void ManipulationGraph::check_node(NodeId x) const {
    if (x >= n_) {
        throw input_error("node id " + std::to_string(x) + " out of range (n=" +
                          std::to_string(n_) + ")");
    }
}

bool ManipulationGraph::has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    auto nb = out_neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::span<const NodeId> ManipulationGraph::out_neighbors(NodeId x) const {
    check_node(x);
    return {out_flat_.data() + out_offsets_[x],
            out_flat_.data() + out_offsets_[x + 1]};
}

std::span<const NodeId> ManipulationGraph::in_neighbors(NodeId x) const {
    check_node(x);
    return {in_flat_.data() + in_offsets_[x], in_flat_.data() + in_offsets_[x + 1]};
}

std::vector<std::pair<NodeId, NodeId>> ManipulationGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < n_; ++u) {
        for (NodeId v : out_neighbors(u)) out.emplace_back(u, v);
    }
    return out;
}

std::vector<NodeId> out_neighborhood_inclusive(const ManipulationGraph& g, NodeId x) {
    auto nb = g.out_neighbors(x);
    std::vector<NodeId> out;
    out.reserve(nb.size() + 1);
    out.assign(nb.begin(), nb.end());
    out.insert(std::lower_bound(out.begin(), out.end(), x), x);
    return out;
}

std::vector<NodeId> in_neighborhood_inclusive(const ManipulationGraph& g, NodeId x) {
    auto nb = g.in_neighbors(x);
    std::vector<NodeId> out;
    out.reserve(nb.size() + 1);
    out.assign(nb.begin(), nb.end());
    out.insert(std::lower_bound(out.begin(), out.end(), x), x);
    return out;
}

std::optional<NodeId> in_neighbor_by_index(const ManipulationGraph& g, NodeId v,
                                           std::size_t r) {
    if (r == 0) return v;
    auto nb = g.in_neighbors(v);
    if (r - 1 >= nb.size()) return std::nullopt;
    return nb[r - 1];
}

std::size_t max_out_degree(const ManipulationGraph& g) {
    std::size_t best = 0;
    for (NodeId x = 0; x < g.node_count(); ++x) {
        best = std::max(best, g.out_neighbors(x).size());
    }
    return best;
}

std::size_t max_in_degree(const ManipulationGraph& g) {
    std::size_t best = 0;
    for (NodeId x = 0; x < g.node_count(); ++x) {
        best = std::max(best, g.in_neighbors(x).size());
    }
    return best;
}

ManipulationGraph union_graph(std::span<const ManipulationGraph> graphs) {
    if (graphs.empty()) throw input_error("union_graph: empty graph list");
    const NodeId n = graphs.front().node_count();
    std::vector<std::pair<NodeId, NodeId>> all;
    for (const auto& g : graphs) {
        if (g.node_count() != n) {
            throw input_error("union_graph: mismatched node counts " + std::to_string(n) +
                              " vs " + std::to_string(g.node_count()));
        }
        auto es = g.edges();
        all.insert(all.end(), es.begin(), es.end());
    }
    return ManipulationGraph(n, all);
}

ManipulationGraph transpose(const ManipulationGraph& g) {
    std::vector<std::pair<NodeId, NodeId>> rev;
    rev.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) rev.emplace_back(v, u);
    return ManipulationGraph(g.node_count(), rev);
}

ManipulationGraph star(NodeId delta) {
    if (delta < 1) throw input_error("star: delta must be >= 1");
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(delta);
    for (NodeId i = 1; i <= delta; ++i) es.emplace_back(0, i);
    return ManipulationGraph(delta + 1, es);
}

ManipulationGraph star_doubled(NodeId delta) {
    if (delta < 1) throw input_error("star_doubled: delta must be >= 1");
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(2 * delta);
    for (NodeId i = 1; i <= delta; ++i) {
        es.emplace_back(0, i);
        es.emplace_back(i, 0);
    }
    return ManipulationGraph(delta + 1, es);
}

ManipulationGraph complete(NodeId n) {
    if (n < 1) throw input_error("complete: n must be >= 1");
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (u != v) es.emplace_back(u, v);
        }
    }
    return ManipulationGraph(n, es);
}

ManipulationGraph isolated(NodeId n) {
    if (n < 1) throw input_error("isolated: n must be >= 1");
    return ManipulationGraph(n, {});
}

ManipulationGraph random_gnp(NodeId n, double p, std::uint64_t seed) {
    if (n < 1) throw input_error("random_gnp: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw input_error("random_gnp: p must be in [0,1]");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<NodeId, NodeId>> es;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            // 53-bit draw, stdlib-distribution free for reproducibility.
            double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (x < p) {
                es.emplace_back(u, v);
                es.emplace_back(v, u);
            }
        }
    }
    return ManipulationGraph(n, es);
}

ManipulationGraph clique_plus(const ManipulationGraph& g_prime, NodeId extra) {
    if (extra < 1) throw input_error("clique_plus: extra node count must be >= 1");
    const NodeId base = g_prime.node_count();
    auto es = g_prime.edges();
    for (NodeId u = 0; u < extra; ++u) {
        for (NodeId v = 0; v < extra; ++v) {
            if (u != v) es.emplace_back(base + u, base + v);
        }
    }
    return ManipulationGraph(base + extra, es);
}

GraphClass::GraphClass(std::vector<ManipulationGraph> members)
    : members_(std::move(members)),
      union_(members_.empty() ? ManipulationGraph()
                              : union_graph(std::span<const ManipulationGraph>(members_))) {
    if (members_.empty()) throw input_error("GraphClass: at least one member required");
}

std::size_t GraphClass::max_out_degree_union() const { return max_out_degree(union_); }

std::size_t GraphClass::max_in_degree_members() const {
    std::size_t best = 0;
    for (const auto& g : members_) best = std::max(best, max_in_degree(g));
    return best;
}

}  // namespace slc
