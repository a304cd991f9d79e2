// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/adversary.hpp"

#include <algorithm>
#include <string>

namespace slc {

namespace {

bool edge_consistent(const Labeling& h, const ManipulationGraph& g, NodeId v, Label y) {
    if (y == Label::positive) return effective_label(h, g, v) == Label::positive;
    for (NodeId x : in_neighborhood_inclusive(g, v)) {
        if (effective_label(h, g, x) == Label::negative) return true;
    }
    return false;
}

// One root-to-leaf walk position, materialized or lazily expanded.
class WitnessWalker {
public:
    virtual ~WitnessWalker() = default;
    virtual NodeId feature() const = 0;
    virtual void descend(NodeId v, Label y) = 0;
};

class TreeWalker : public WitnessWalker {
public:
    explicit TreeWalker(const SLTreeWitness& root) : node_(&root) {}
    NodeId feature() const override { return node_->root_feature; }
    void descend(NodeId v, Label y) override {
        auto it = node_->children.find({v, y});
        if (it == node_->children.end()) {
            throw protocol_error("witness is not fully branched: missing edge (" +
                                 std::to_string(v) + "," +
                                 std::string(y == Label::positive ? "+1" : "-1") + ")");
        }
        node_ = &it->second;
    }

private:
    const SLTreeWitness* node_;
};

class LazyWalker : public WitnessWalker {
public:
    LazyWalker(const SldimSolver& solver, MemberMask mask, int budget)
        : solver_(&solver), mask_(std::move(mask)), budget_(budget) {
        refresh();
    }
    NodeId feature() const override { return feature_; }
    void descend(NodeId v, Label y) override {
        mask_ = solver_->filter(mask_, {v, y});
        --budget_;
        if (budget_ > 0) refresh();
    }

private:
    void refresh() { feature_ = solver_->witness_root(mask_, budget_); }

    const SldimSolver* solver_;
    MemberMask mask_;
    int budget_;
    NodeId feature_ = 0;
};

AdversaryOutcome run_walk(WitnessWalker& walker, int depth, Learner& learner,
                          const HypothesisClass& hc, const ManipulationGraph& g) {
    AdversaryOutcome out;
    std::vector<std::pair<NodeId, Label>> edges;
    edges.reserve(static_cast<std::size_t>(depth));

    for (int t = 0; t < depth; ++t) {
        const NodeId xprime = walker.feature();
        const Labeling& committed = learner.commit();

        NodeId v = xprime;
        Label y = Label::positive;
        for (NodeId cand : out_neighborhood_inclusive(g, xprime)) {
            if (committed.is_positive(cand)) {
                v = cand;
                y = Label::negative;
                break;
            }
        }
        const Label prediction = committed[v];

        TranscriptRow row;
        row.t = static_cast<std::size_t>(t) + 1;
        row.v = v;
        row.y = y;
        row.prediction = prediction;
        row.mistake = true;
        row.classifier_digest = committed.digest_hex();
        out.transcript.rows.push_back(std::move(row));

        learner.observe({v, y}, true);
        edges.emplace_back(v, y);
        if (t + 1 < depth) walker.descend(v, y);
    }

    // Reverse-engineer the realizable sequence from a hypothesis consistent
    // with the whole path.
    std::optional<std::size_t> star;
    for (std::size_t i = 0; i < hc.size() && !star; ++i) {
        bool ok = true;
        for (const auto& [v, y] : edges) {
            if (!edge_consistent(hc.member(i), g, v, y)) {
                ok = false;
                break;
            }
        }
        if (ok) star = i;
    }
    if (!star) {
        throw protocol_error("no hypothesis is consistent with the walked path; "
                             "witness is not shattered by the class");
    }
    const Labeling& hstar = hc.member(*star);
    out.certificate.hypothesis_index = *star;

    for (std::size_t t = 0; t < edges.size(); ++t) {
        const auto& [v, y] = edges[t];
        NodeId x = v;
        if (y == Label::negative) {
            bool found = false;
            for (NodeId cand : in_neighborhood_inclusive(g, v)) {
                if (effective_label(hstar, g, cand) == Label::negative) {
                    x = cand;
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw protocol_error("consistency failure while reverse-engineering round " +
                                     std::to_string(t + 1));
            }
        }
        out.sequence.agents.push_back({x, y});
        out.certificate.effective_labels.push_back(effective_label(hstar, g, x));
        out.transcript.rows[t].x = x;
    }
    out.sequence.certificate = out.certificate;
    out.transcript.mistakes = edges.size();
    out.transcript.set_opt_h(0, *star);
    return out;
}

}  // namespace

bool certificate_valid(const AgentSequence& s, const HypothesisClass& hc,
                       const ManipulationGraph& g) {
    if (!s.certificate) return false;
    const auto& cert = *s.certificate;
    if (cert.hypothesis_index >= hc.size()) return false;
    if (cert.effective_labels.size() != s.agents.size()) return false;
    const Labeling& h = hc.member(cert.hypothesis_index);
    for (std::size_t t = 0; t < s.agents.size(); ++t) {
        Label eff = effective_label(h, g, s.agents[t].x);
        if (eff != s.agents[t].y || eff != cert.effective_labels[t]) return false;
    }
    return true;
}

AdversaryOutcome lower_bound_adversary(const SLTreeWitness& witness, Learner& learner,
                                       const HypothesisClass& hc, const ManipulationGraph& g) {
    TreeWalker walker(witness);
    return run_walk(walker, witness.depth(), learner, hc, g);
}

AdversaryOutcome lower_bound_adversary(const SldimSolver& solver, Learner& learner) {
    MemberMask full = solver.full_mask();
    const int depth = solver.dimension(full);
    LazyWalker walker(solver, std::move(full), depth);
    return run_walk(walker, depth, learner, solver.hypothesis_class(), solver.graph());
}

AgentSequence realizable_sequence(std::size_t h_star_index, const HypothesisClass& hc,
                                  const ManipulationGraph& g, std::span<const NodeId> xs) {
    if (h_star_index >= hc.size()) {
        throw input_error("hypothesis index " + std::to_string(h_star_index) +
                          " out of range for class of size " + std::to_string(hc.size()));
    }
    const Labeling& h = hc.member(h_star_index);
    AgentSequence s;
    RealizabilityCertificate cert;
    cert.hypothesis_index = h_star_index;
    for (NodeId x : xs) {
        Label y = effective_label(h, g, x);
        s.agents.push_back({x, y});
        cert.effective_labels.push_back(y);
    }
    s.certificate = std::move(cert);
    return s;
}

namespace {

std::vector<std::size_t> choose_rounds(std::size_t total, std::size_t k, RandomSource& rng) {
    std::vector<std::size_t> rounds(total);
    for (std::size_t i = 0; i < total; ++i) rounds[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.next_index(total - i);
        std::swap(rounds[i], rounds[j]);
    }
    rounds.resize(k);
    std::sort(rounds.begin(), rounds.end());
    return rounds;
}

}  // namespace

AgentSequence corrupt_labels(const AgentSequence& s, std::size_t k, RandomSource& rng) {
    if (k > s.size()) {
        throw input_error("corrupt_labels: k=" + std::to_string(k) + " exceeds sequence length " +
                          std::to_string(s.size()));
    }
    AgentSequence out = s;
    out.certificate.reset();
    out.corrupted_rounds = choose_rounds(s.size(), k, rng);
    for (std::size_t t : out.corrupted_rounds) out.agents[t].y = flip(out.agents[t].y);
    return out;
}

AgentSequence corrupt_graphs(const AgentSequence& s, const ManipulationGraph& g_base,
                             std::span<const ManipulationGraph> variants, std::size_t k,
                             RandomSource& rng) {
    if (k > s.size()) {
        throw input_error("corrupt_graphs: k=" + std::to_string(k) + " exceeds sequence length " +
                          std::to_string(s.size()));
    }
    if (k > 0 && variants.empty()) {
        throw input_error("corrupt_graphs: no variant graphs supplied");
    }
    for (const auto& v : variants) {
        if (v.node_count() != g_base.node_count()) {
            throw input_error("corrupt_graphs: variant node count mismatch");
        }
    }
    AgentSequence out = s;
    out.graph_pool.clear();
    out.graph_pool.push_back(g_base);
    out.graph_pool.insert(out.graph_pool.end(), variants.begin(), variants.end());
    out.round_graph.assign(s.size(), 0);
    out.corrupted_rounds = choose_rounds(s.size(), k, rng);
    for (std::size_t t : out.corrupted_rounds) {
        out.round_graph[t] = 1 + static_cast<int>(rng.next_index(variants.size()));
    }
    return out;
}

}  // namespace slc
