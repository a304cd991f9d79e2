// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/hypothesis.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace slc {

Label label_from_int(int v) {
    if (v == -1) return Label::negative;
    if (v == 1) return Label::positive;
    throw input_error("label must be -1 or +1, got " + std::to_string(v));
}

std::uint64_t Labeling::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Label y : labels_) {
        h ^= static_cast<std::uint8_t>(y);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string Labeling::digest_hex() const {
    static const char* hex = "0123456789abcdef";
    std::uint64_t d = digest();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[d & 0xf];
        d >>= 4;
    }
    return out;
}

HypothesisClass::HypothesisClass(NodeId n, std::vector<Labeling> members)
    : n_(n), members_(std::move(members)) {
    std::set<Labeling> seen;
    for (const auto& m : members_) {
        if (m.size() != n_) {
            throw input_error("hypothesis size " + std::to_string(m.size()) +
                              " does not match n=" + std::to_string(n_));
        }
        if (!seen.insert(m).second) {
            throw input_error("duplicate hypothesis in class");
        }
    }
}

MemberMask MemberMask::full(std::size_t universe) {
    MemberMask m(universe);
    for (std::size_t b = 0; b < m.blocks_.size(); ++b) m.blocks_[b] = ~std::uint64_t{0};
    if (universe % 64 != 0 && !m.blocks_.empty()) {
        m.blocks_.back() &= (std::uint64_t{1} << (universe % 64)) - 1;
    }
    return m;
}

std::size_t MemberMask::count() const {
    std::size_t c = 0;
    for (auto b : blocks_) c += static_cast<std::size_t>(std::popcount(b));
    return c;
}

bool MemberMask::empty() const {
    for (auto b : blocks_) {
        if (b) return false;
    }
    return true;
}

MemberMask MemberMask::operator&(const MemberMask& other) const {
    MemberMask out(universe_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) out.blocks_[i] = blocks_[i] & other.blocks_[i];
    return out;
}

MemberMask MemberMask::operator|(const MemberMask& other) const {
    MemberMask out(universe_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) out.blocks_[i] = blocks_[i] | other.blocks_[i];
    return out;
}

MemberMask MemberMask::minus(const MemberMask& other) const {
    MemberMask out(universe_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) out.blocks_[i] = blocks_[i] & ~other.blocks_[i];
    return out;
}

bool MemberMask::is_subset_of(const MemberMask& other) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i] & ~other.blocks_[i]) return false;
    }
    return true;
}

std::vector<std::size_t> MemberMask::to_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

std::size_t MemberMask::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto b : blocks_) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
}

VersionSpace VersionSpace::full_of(const HypothesisClass& hc) {
    return {&hc, MemberMask::full(hc.size())};
}

Label effective_label(const Labeling& h, const ManipulationGraph& g, NodeId x) {
    if (h.is_positive(x)) return Label::positive;
    for (NodeId v : g.out_neighbors(x)) {
        if (h.is_positive(v)) return Label::positive;
    }
    return Label::negative;
}

Labeling effective_labeling(const Labeling& h, const ManipulationGraph& g) {
    std::vector<Label> out(g.node_count());
    for (NodeId x = 0; x < g.node_count(); ++x) out[x] = effective_label(h, g, x);
    return Labeling(std::move(out));
}

std::vector<NodeId> best_response_set(const Labeling& h, const ManipulationGraph& g,
                                      NodeId x) {
    std::vector<NodeId> out;
    for (NodeId v : out_neighborhood_inclusive(g, x)) {
        if (h.is_positive(v)) out.push_back(v);
    }
    return out;
}

NodeId best_response(const Labeling& h, const ManipulationGraph& g, NodeId x,
                     const TieBreakPolicy& policy) {
    auto br = best_response_set(h, g, x);
    if (br.empty()) return x;
    switch (policy.kind) {
        case TieBreak::canonical_stay:
            if (h.is_positive(x)) return x;
            return br.front();
        case TieBreak::lowest_id:
            return br.front();
        case TieBreak::callback: {
            NodeId chosen = policy.choose(x, br);
            if (!std::binary_search(br.begin(), br.end(), chosen)) {
                throw protocol_error("tie-break callback chose node " + std::to_string(chosen) +
                                     " outside the best-response set");
            }
            return chosen;
        }
    }
    return x;
}

VersionSpace filter_consistent(const VersionSpace& f, const ManipulationGraph& g,
                               const Observation& obs) {
    VersionSpace out{f.cls, MemberMask(f.mask.universe())};
    f.mask.for_each([&](std::size_t i) {
        const Labeling& h = f.cls->member(i);
        if (obs.y == Label::positive) {
            if (effective_label(h, g, obs.v) == Label::positive) out.mask.set(i);
        } else {
            for (NodeId x : in_neighborhood_inclusive(g, obs.v)) {
                if (effective_label(h, g, x) == Label::negative) {
                    out.mask.set(i);
                    break;
                }
            }
        }
    });
    return out;
}

HypothesisClass point_functions_class(NodeId n_leaves) {
    if (n_leaves < 1) throw input_error("point_functions_class: need at least one leaf");
    const NodeId n = n_leaves + 1;
    std::vector<Labeling> members;
    members.reserve(n_leaves);
    for (NodeId i = 1; i <= n_leaves; ++i) {
        Labeling h = Labeling::constant(n, Label::negative);
        h.set(i, Label::positive);
        members.push_back(std::move(h));
    }
    return HypothesisClass(n, std::move(members));
}

HypothesisClass all_functions_class(NodeId n, NodeId cap) {
    if (n < 1) throw input_error("all_functions_class: n must be >= 1");
    if (n > cap) {
        throw resource_error("all_functions_class: n=" + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap));
    }
    std::vector<Labeling> members;
    members.reserve(std::size_t{1} << n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<Label> labels(n);
        for (NodeId j = 0; j < n; ++j) {
            labels[j] = ((bits >> (n - 1 - j)) & 1) ? Label::positive : Label::negative;
        }
        members.emplace_back(std::move(labels));
    }
    return HypothesisClass(n, std::move(members));
}

HypothesisClass effective_reduction(const HypothesisClass& hc, const ManipulationGraph& g) {
    std::map<Labeling, std::size_t> rep;  // effective labeling -> lowest member index
    for (std::size_t i = 0; i < hc.size(); ++i) {
        Labeling eff = effective_labeling(hc.member(i), g);
        rep.emplace(std::move(eff), i);  // keeps the first (lowest) index
    }
    std::vector<std::size_t> order;
    order.reserve(rep.size());
    for (const auto& [eff, idx] : rep) order.push_back(idx);
    std::sort(order.begin(), order.end());
    std::vector<Labeling> members;
    members.reserve(order.size());
    for (std::size_t idx : order) members.push_back(hc.member(idx));
    return HypothesisClass(hc.node_count(), std::move(members));
}

}  // namespace slc
