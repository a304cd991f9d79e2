// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slc/graph.hpp"

namespace slc {

enum class Label : std::int8_t { negative = -1, positive = +1 };

inline Label flip(Label y) { return y == Label::positive ? Label::negative : Label::positive; }
inline int label_to_int(Label y) { return static_cast<int>(y); }
Label label_from_int(int v);  // accepts exactly -1 / +1

/// A total {-1,+1} assignment over the feature space. Serves both as a
/// hypothesis h in H and as a committed classifier h_t.
class Labeling {
public:
    Labeling() = default;
    explicit Labeling(std::vector<Label> labels) : labels_(std::move(labels)) {}
    static Labeling constant(NodeId n, Label y) { return Labeling(std::vector<Label>(n, y)); }

    NodeId size() const { return static_cast<NodeId>(labels_.size()); }
    Label operator[](NodeId x) const { return labels_[x]; }
    void set(NodeId x, Label y) { labels_[x] = y; }
    bool is_positive(NodeId x) const { return labels_[x] == Label::positive; }

    bool operator==(const Labeling& other) const = default;
    bool operator<(const Labeling& other) const { return labels_ < other.labels_; }

    /// Stable FNV-1a content hash, used as the transcript classifier digest.
    std::uint64_t digest() const;
    std::string digest_hex() const;

private:
    std::vector<Label> labels_;
};

/// Ordered list of distinct labelings over a shared node count.
class HypothesisClass {
public:
    HypothesisClass() = default;
    /// Throws input_error on duplicates or size mismatches.
    HypothesisClass(NodeId n, std::vector<Labeling> members);

    NodeId node_count() const { return n_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const Labeling& member(std::size_t i) const { return members_.at(i); }
    const std::vector<Labeling>& members() const { return members_; }

private:
    NodeId n_ = 0;
    std::vector<Labeling> members_;
};

/// Fixed-capacity bit set over hypothesis-class member indices.
class MemberMask {
public:
    MemberMask() = default;
    explicit MemberMask(std::size_t universe)
        : universe_(universe), blocks_((universe + 63) / 64, 0) {}
    static MemberMask full(std::size_t universe);

    std::size_t universe() const { return universe_; }
    bool test(std::size_t i) const { return (blocks_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { blocks_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    std::size_t count() const;
    bool empty() const;

    MemberMask operator&(const MemberMask& other) const;
    MemberMask operator|(const MemberMask& other) const;
    /// Members of *this not in other.
    MemberMask minus(const MemberMask& other) const;
    bool is_subset_of(const MemberMask& other) const;
    bool operator==(const MemberMask& other) const = default;

    /// Indices of set bits, ascending.
    std::vector<std::size_t> to_indices() const;
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            std::uint64_t w = blocks_[b];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                fn(b * 64 + bit);
                w &= w - 1;
            }
        }
    }

    std::size_t hash() const;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> blocks_;
};

struct MemberMaskHash {
    std::size_t operator()(const MemberMask& m) const { return m.hash(); }
};

/// Subset of a hypothesis class: non-owning class reference plus a bit set.
struct VersionSpace {
    const HypothesisClass* cls = nullptr;
    MemberMask mask;

    static VersionSpace full_of(const HypothesisClass& hc);
    std::size_t count() const { return mask.count(); }
    bool empty() const { return mask.empty(); }
};

/// Post-manipulation feature plus true label, as observed by the learner.
struct Observation {
    NodeId v = 0;
    Label y = Label::positive;
};

/// Label h assigns to an agent's best response from x: +1 iff some node in
/// N+[x] is positive under h. Independent of tie-breaking.
Label effective_label(const Labeling& h, const ManipulationGraph& g, NodeId x);

/// The full effective labeling of h under g.
Labeling effective_labeling(const Labeling& h, const ManipulationGraph& g);

enum class TieBreak { canonical_stay, lowest_id, callback };

/// How an agent picks among equally good best responses. The callback form
/// lets an adversary choose; choices outside the response set are protocol
/// errors.
struct TieBreakPolicy {
    TieBreak kind = TieBreak::canonical_stay;
    std::function<NodeId(NodeId x, std::span<const NodeId> candidates)> choose;

    static TieBreakPolicy canonical_stay() { return {TieBreak::canonical_stay, nullptr}; }
    static TieBreakPolicy lowest_id() { return {TieBreak::lowest_id, nullptr}; }
    static TieBreakPolicy callback(
        std::function<NodeId(NodeId, std::span<const NodeId>)> fn) {
        return {TieBreak::callback, std::move(fn)};
    }
};

/// The node an agent at x reports against classifier h: a positively labeled
/// member of N+[x] chosen by the policy, or x itself when none exists.
NodeId best_response(const Labeling& h, const ManipulationGraph& g, NodeId x,
                     const TieBreakPolicy& policy);

/// Set of positively labeled nodes in N+[x], ascending (empty means stay).
std::vector<NodeId> best_response_set(const Labeling& h, const ManipulationGraph& g, NodeId x);

/// The consistency filter of the strategic tree definition:
///   (v,+1) keeps h with effective label +1 at v;
///   (v,-1) keeps h whose effective label is -1 somewhere in N-[v].
VersionSpace filter_consistent(const VersionSpace& f, const ManipulationGraph& g,
                               const Observation& obs);

/// The delta point functions over the star's delta+1 nodes; member i-1 is
/// positive only on leaf i.
HypothesisClass point_functions_class(NodeId n_leaves);

inline constexpr NodeId kAllFunctionsCap = 20;

/// All 2^n labelings in lexicographic order (node 0 most significant,
/// negative < positive). Throws resource_error past the cap.
HypothesisClass all_functions_class(NodeId n, NodeId cap = kAllFunctionsCap);

/// One representative (lowest member index) per distinct effective labeling.
HypothesisClass effective_reduction(const HypothesisClass& hc, const ManipulationGraph& g);

}  // namespace slc
