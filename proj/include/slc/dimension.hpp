// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"

namespace slc {

/// Hard cap on class sizes for dimension queries.
inline constexpr std::size_t kVersionSpaceCap = 4096;

/// A shattered strategic Littlestone tree. Every non-leaf node with feature
/// x branches on exactly the edge keys {(x,+1)} and {(v,-1) : v in N+[x]};
/// depth is 1 plus the minimum over child depths (0 at leaves).
struct SLTreeWitness {
    NodeId root_feature = 0;
    // Edge key (v, y) -> subtree, ordered for reproducible serialization.
    std::map<std::pair<NodeId, Label>, SLTreeWitness> children;

    int depth() const;
};

/// Dimension session for one (hypothesis class, graph) pair.
///
/// Computes the strategic Littlestone dimension by the max-min recursion
/// over consistency-filtered version spaces:
///   sldim(F) = max over x of min over edges e at x of 1 + sldim(F^e),
/// with sldim(empty) = -1, memoized on the version-space bit mask.
///
/// Branches whose filter keeps all of F never determine the inner min: any
/// h in F with effective label -1 at x leaves the (x,+1) branch, and any h
/// with a positive witness v in N+[x] leaves the (v,-1) branch at that v,
/// so some branch is always a proper subset and the self-referential terms
/// exceed the final value. Dropping them makes the recursion well-founded
/// (filters only shrink masks).
///
/// Queries are thread-safe; the shared memo table is guarded internally.
class SldimSolver {
public:
    SldimSolver(const HypothesisClass& hc, const ManipulationGraph& g);

    const HypothesisClass& hypothesis_class() const { return *hc_; }
    const ManipulationGraph& graph() const { return *g_; }

    MemberMask full_mask() const { return MemberMask::full(hc_->size()); }

    /// -1 for the empty mask.
    int dimension(const MemberMask& mask) const;

    /// One consistency-filter step: mask restricted to hypotheses consistent
    /// with obs. Agrees with filter_consistent on the same class and graph.
    MemberMask filter(const MemberMask& mask, const Observation& obs) const;

    /// Effective labeling of member i, precomputed.
    const Labeling& effective(std::size_t i) const { return effective_[i]; }

    /// The SSOA commit for a version space (positive where the
    /// false-positive filter strictly drops the dimension), cached by mask
    /// so expert pools over one session share labelings. Thread-safe.
    std::shared_ptr<const Labeling> ssoa_commit_for(const MemberMask& mask) const;

    /// Tree of depth exactly dimension(mask), fully branched, every
    /// root-to-leaf path consistent with some hypothesis in mask.
    /// Tie-breaks choose the lowest qualifying root feature throughout.
    SLTreeWitness witness(const MemberMask& mask) const;

    /// Lowest root feature for a subtree of depth `budget` over mask, and
    /// the child state along an edge; lets callers walk a witness lazily
    /// when the materialized tree would be too large.
    NodeId witness_root(const MemberMask& mask, int budget) const;

private:
    int dimension_locked(const MemberMask& mask) const;
    int min_over_branches(const MemberMask& mask, NodeId x) const;
    SLTreeWitness witness_depth(const MemberMask& mask, int budget) const;

    const HypothesisClass* hc_;
    const ManipulationGraph* g_;
    std::vector<Labeling> effective_;       // per member
    std::vector<MemberMask> fn_keep_;       // per node v: members with eff +1 at v
    std::vector<MemberMask> fp_keep_;       // per node v: members eff -1 somewhere in N-[v]
    std::vector<std::vector<NodeId>> nplus_;  // inclusive out-neighborhoods

    mutable std::shared_mutex cache_mutex_;
    mutable std::unordered_map<MemberMask, int, MemberMaskHash> cache_;
    // The commit cache is sharded by mask hash: expert pools hit it from
    // every worker thread at once.
    static constexpr std::size_t kCommitShards = 16;
    struct CommitShard {
        std::shared_mutex mutex;
        std::unordered_map<MemberMask, std::shared_ptr<const Labeling>, MemberMaskHash> map;
    };
    mutable std::array<CommitShard, kCommitShards> commit_shards_;
};

/// Strategic Littlestone dimension of the whole class; nullopt when empty.
std::optional<int> sldim(const HypothesisClass& hc, const ManipulationGraph& g);

/// Dimension of a version space (fresh cache per call; -1 when empty).
int sldim(const VersionSpace& f, const ManipulationGraph& g);

/// Witness extraction for a version space. Throws input_error when empty.
SLTreeWitness sldim_witness(const VersionSpace& f, const ManipulationGraph& g);

/// Definition-level check, coded independently of the recursion: validates
/// the branching structure and searches, per root-to-leaf path, for a
/// hypothesis consistent with every edge on the path.
bool is_shattered(const SLTreeWitness& t, const VersionSpace& f, const ManipulationGraph& g);

/// Classical Littlestone dimension via pointwise filters. nullopt when empty.
std::optional<int> ldim(const HypothesisClass& hc);

/// Classical dimension of a subset mask (-1 when empty).
int ldim_mask(const HypothesisClass& hc, const MemberMask& mask);

}  // namespace slc
