// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slc/error.hpp"

namespace slc {

/// Index of a feature-space node, 0 <= value < n.
using NodeId = std::uint32_t;

/// Finite directed manipulation graph over nodes 0..n-1.
///
/// Self-loops are never stored; inclusive neighborhoods add the node itself
/// on query. Adjacency lists are kept sorted, edges deduplicated, and the
/// in/out lists are exact transposes of each other. Immutable after
/// construction, so concurrent read-only use is safe.
class ManipulationGraph {
public:
    ManipulationGraph() = default;

    /// Builds a graph from an edge list. Out-of-range endpoints and
    /// self-loops are input errors; duplicate edges collapse.
    ManipulationGraph(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges);
    ManipulationGraph(NodeId n, std::initializer_list<std::pair<NodeId, NodeId>> edges);

    NodeId node_count() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }

    bool has_edge(NodeId u, NodeId v) const;

    /// Exclusive neighborhoods, ascending order.
    std::span<const NodeId> out_neighbors(NodeId x) const;
    std::span<const NodeId> in_neighbors(NodeId x) const;

    /// All edges as ordered pairs, sorted lexicographically.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool operator==(const ManipulationGraph& other) const = default;

private:
    void check_node(NodeId x) const;

    NodeId n_ = 0;
    std::size_t edge_count_ = 0;
    // CSR-style storage, one offset table per direction.
    std::vector<std::uint32_t> out_offsets_{0};
    std::vector<NodeId> out_flat_;
    std::vector<std::uint32_t> in_offsets_{0};
    std::vector<NodeId> in_flat_;
};

/// N+[x] = {x} plus exclusive out-neighbors, ascending.
std::vector<NodeId> out_neighborhood_inclusive(const ManipulationGraph& g, NodeId x);

/// N-[x] = {x} plus exclusive in-neighbors, ascending.
std::vector<NodeId> in_neighborhood_inclusive(const ManipulationGraph& g, NodeId x);

/// The r-th entry of the per-node in-neighbor indexing: position 0 is v
/// itself, positions 1.. are the exclusive in-neighbors of v ascending.
/// Absent (not an error) when r >= |N-[v]|.
std::optional<NodeId> in_neighbor_by_index(const ManipulationGraph& g, NodeId v, std::size_t r);

/// Max over nodes of the exclusive out-degree (0 for edgeless graphs).
std::size_t max_out_degree(const ManipulationGraph& g);
/// Max over nodes of the exclusive in-degree.
std::size_t max_in_degree(const ManipulationGraph& g);

/// Edge-set union of graphs sharing a node count.
ManipulationGraph union_graph(std::span<const ManipulationGraph> graphs);

/// Graph with every edge reversed.
ManipulationGraph transpose(const ManipulationGraph& g);

// Instance generators. All deterministic given their arguments.

/// Star with center 0 and `delta` leaves; edges center->leaf only.
ManipulationGraph star(NodeId delta);
/// Star with both center->leaf and leaf->center edges. This is the
/// manipulation structure of the randomization-gap instance.
ManipulationGraph star_doubled(NodeId delta);
/// Complete digraph on n nodes (all ordered pairs).
ManipulationGraph complete(NodeId n);
/// Edgeless graph on n nodes.
ManipulationGraph isolated(NodeId n);
/// Every undirected pair realized independently with probability p; both
/// directions inserted for realized pairs.
ManipulationGraph random_gnp(NodeId n, double p, std::uint64_t seed);
/// Disjoint union of g_prime and a complete digraph on extra fresh nodes.
ManipulationGraph clique_plus(const ManipulationGraph& g_prime, NodeId extra);

/// Nonempty ordered list of graphs over one node count, with a cached union.
class GraphClass {
public:
    explicit GraphClass(std::vector<ManipulationGraph> members);

    std::size_t size() const { return members_.size(); }
    const ManipulationGraph& member(std::size_t i) const { return members_.at(i); }
    const std::vector<ManipulationGraph>& members() const { return members_; }
    const ManipulationGraph& union_of() const { return union_; }
    NodeId node_count() const { return members_.front().node_count(); }

    /// Max out-degree of the union graph (the theorem's Delta+).
    std::size_t max_out_degree_union() const;
    /// Max over members of the member's max in-degree.
    std::size_t max_in_degree_members() const;

private:
    std::vector<ManipulationGraph> members_;
    ManipulationGraph union_;
};

}  // namespace slc
