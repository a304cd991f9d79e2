// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/dimension.hpp"

#include <algorithm>
#include <climits>
#include <string>

namespace slc {

int SLTreeWitness::depth() const {
    if (children.empty()) return 0;
    int least = INT_MAX;
    for (const auto& [edge, child] : children) least = std::min(least, child.depth());
    return 1 + least;
}

SldimSolver::SldimSolver(const HypothesisClass& hc, const ManipulationGraph& g)
    : hc_(&hc), g_(&g) {
    if (hc.node_count() != g.node_count()) {
        throw input_error("hypothesis class is over n=" + std::to_string(hc.node_count()) +
                          " but graph has n=" + std::to_string(g.node_count()));
    }
    if (hc.size() > kVersionSpaceCap) {
        throw resource_error("class size " + std::to_string(hc.size()) +
                             " exceeds version-space cap " + std::to_string(kVersionSpaceCap));
    }
    const std::size_t m = hc.size();
    const NodeId n = g.node_count();
    effective_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) effective_.push_back(effective_labeling(hc.member(i), g));

    fn_keep_.assign(n, MemberMask(m));
    for (NodeId v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < m; ++i) {
            if (effective_[i].is_positive(v)) fn_keep_[v].set(i);
        }
    }
    fp_keep_.assign(n, MemberMask(m));
    for (NodeId v = 0; v < n; ++v) {
        MemberMask keep(m);
        for (NodeId x : in_neighborhood_inclusive(g, v)) {
            keep = keep | MemberMask::full(m).minus(fn_keep_[x]);
        }
        fp_keep_[v] = keep;
    }
    nplus_.reserve(n);
    for (NodeId x = 0; x < n; ++x) nplus_.push_back(out_neighborhood_inclusive(g, x));
}

MemberMask SldimSolver::filter(const MemberMask& mask, const Observation& obs) const {
    if (obs.v >= g_->node_count()) {
        throw input_error("observation node " + std::to_string(obs.v) + " out of range");
    }
    return mask & (obs.y == Label::positive ? fn_keep_[obs.v] : fp_keep_[obs.v]);
}

int SldimSolver::dimension(const MemberMask& mask) const {
    {
        std::shared_lock read(cache_mutex_);
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
    }
    std::unique_lock write(cache_mutex_);
    return dimension_locked(mask);
}

int SldimSolver::min_over_branches(const MemberMask& mask, NodeId x) const {
    int least = INT_MAX;
    auto consider = [&](const MemberMask& sub) {
        if (sub == mask) return;  // self branch, never the inner minimum
        least = std::min(least, 1 + dimension_locked(sub));
    };
    consider(mask & fn_keep_[x]);
    for (NodeId v : nplus_[x]) {
        if (least == 0) break;
        consider(mask & fp_keep_[v]);
    }
    return least;
}

int SldimSolver::dimension_locked(const MemberMask& mask) const {
    if (mask.empty()) return -1;
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    int best = 0;
    for (NodeId x = 0; x < g_->node_count(); ++x) {
        best = std::max(best, min_over_branches(mask, x));
    }
    cache_.emplace(mask, best);
    return best;
}

NodeId SldimSolver::witness_root(const MemberMask& mask, int budget) const {
    std::unique_lock write(cache_mutex_);
    for (NodeId x = 0; x < g_->node_count(); ++x) {
        if (min_over_branches(mask, x) >= budget) return x;
    }
    throw input_error("no witness root at depth " + std::to_string(budget) +
                      "; mask dimension is " + std::to_string(dimension_locked(mask)));
}

SLTreeWitness SldimSolver::witness_depth(const MemberMask& mask, int budget) const {
    SLTreeWitness node;
    node.root_feature = witness_root(mask, budget);
    if (budget == 0) return node;
    const NodeId x = node.root_feature;
    node.children.emplace(std::make_pair(x, Label::positive),
                          witness_depth(mask & fn_keep_[x], budget - 1));
    for (NodeId v : nplus_[x]) {
        node.children.emplace(std::make_pair(v, Label::negative),
                              witness_depth(mask & fp_keep_[v], budget - 1));
    }
    return node;
}

SLTreeWitness SldimSolver::witness(const MemberMask& mask) const {
    if (mask.empty()) throw input_error("witness of an empty version space is undefined");
    return witness_depth(mask, dimension(mask));
}

std::shared_ptr<const Labeling> SldimSolver::ssoa_commit_for(const MemberMask& mask) const {
    CommitShard& shard = commit_shards_[mask.hash() % kCommitShards];
    {
        std::shared_lock read(shard.mutex);
        auto it = shard.map.find(mask);
        if (it != shard.map.end()) return it->second;
    }
    const NodeId n = g_->node_count();
    const int d = dimension(mask);
    Labeling h = Labeling::constant(n, Label::negative);
    for (NodeId x = 0; x < n; ++x) {
        if (dimension(mask & fp_keep_[x]) < d) h.set(x, Label::positive);
    }
    auto labeling = std::make_shared<const Labeling>(std::move(h));
    std::unique_lock write(shard.mutex);
    return shard.map.emplace(mask, std::move(labeling)).first->second;
}

std::optional<int> sldim(const HypothesisClass& hc, const ManipulationGraph& g) {
    if (hc.empty()) return std::nullopt;
    SldimSolver solver(hc, g);
    return solver.dimension(solver.full_mask());
}

int sldim(const VersionSpace& f, const ManipulationGraph& g) {
    if (f.mask.empty()) return -1;
    SldimSolver solver(*f.cls, g);
    return solver.dimension(f.mask);
}

SLTreeWitness sldim_witness(const VersionSpace& f, const ManipulationGraph& g) {
    if (f.cls == nullptr || f.mask.empty()) {
        throw input_error("witness of an empty version space is undefined");
    }
    SldimSolver solver(*f.cls, g);
    return solver.witness(f.mask);
}

namespace {

bool structure_ok(const SLTreeWitness& t, const ManipulationGraph& g) {
    if (t.children.empty()) return true;
    std::map<std::pair<NodeId, Label>, bool> expected;
    expected[{t.root_feature, Label::positive}] = false;
    for (NodeId v : out_neighborhood_inclusive(g, t.root_feature)) {
        expected[{v, Label::negative}] = false;
    }
    if (expected.size() != t.children.size()) return false;
    for (const auto& [edge, child] : t.children) {
        auto it = expected.find(edge);
        if (it == expected.end()) return false;
        if (!structure_ok(child, g)) return false;
    }
    return true;
}

bool edge_consistent(const Labeling& h, const ManipulationGraph& g, NodeId v, Label y) {
    if (y == Label::positive) return effective_label(h, g, v) == Label::positive;
    for (NodeId x : in_neighborhood_inclusive(g, v)) {
        if (effective_label(h, g, x) == Label::negative) return true;
    }
    return false;
}

bool paths_consistent(const SLTreeWitness& t, const VersionSpace& f,
                      const ManipulationGraph& g,
                      std::vector<std::pair<NodeId, Label>>& path) {
    if (t.children.empty()) {
        bool found = false;
        f.mask.for_each([&](std::size_t i) {
            if (found) return;
            const Labeling& h = f.cls->member(i);
            bool ok = true;
            for (const auto& [v, y] : path) {
                if (!edge_consistent(h, g, v, y)) {
                    ok = false;
                    break;
                }
            }
            found = ok;
        });
        return found;
    }
    for (const auto& [edge, child] : t.children) {
        path.push_back(edge);
        bool ok = paths_consistent(child, f, g, path);
        path.pop_back();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool is_shattered(const SLTreeWitness& t, const VersionSpace& f, const ManipulationGraph& g) {
    if (f.cls == nullptr || f.mask.empty()) return false;
    if (!structure_ok(t, g)) return false;
    std::vector<std::pair<NodeId, Label>> path;
    return paths_consistent(t, f, g, path);
}

int ldim_mask(const HypothesisClass& hc, const MemberMask& mask) {
    const std::size_t m = hc.size();
    const NodeId n = hc.node_count();
    std::vector<MemberMask> pos(n, MemberMask(m));
    for (NodeId x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < m; ++i) {
            if (hc.member(i).is_positive(x)) pos[x].set(i);
        }
    }
    std::unordered_map<MemberMask, int, MemberMaskHash> memo;
    auto rec = [&](auto&& self, const MemberMask& f) -> int {
        if (f.empty()) return -1;
        auto it = memo.find(f);
        if (it != memo.end()) return it->second;
        int best = 0;
        for (NodeId x = 0; x < n; ++x) {
            MemberMask a = f & pos[x];
            MemberMask b = f.minus(pos[x]);
            if (a == f || b == f) continue;  // one side empty: min is 0
            best = std::max(best, std::min(1 + self(self, a), 1 + self(self, b)));
        }
        memo.emplace(f, best);
        return best;
    };
    return rec(rec, mask);
}

std::optional<int> ldim(const HypothesisClass& hc) {
    if (hc.empty()) return std::nullopt;
    return ldim_mask(hc, MemberMask::full(hc.size()));
}

}  // namespace slc
