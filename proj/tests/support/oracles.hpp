// Copyright 2026 slcsim authors
// License: Apache-2.0
//
// Test-only oracles, coded from the definitions rather than the library's
// memoized recursion, plus deterministic instance corpora.

#pragma once

#include <string>
#include <vector>

#include "slc/adversary.hpp"
#include "slc/agnostic.hpp"
#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/learners.hpp"

namespace slc::testing {

// Effective label by a full node scan over has_edge (not the library path).
bool oracle_effective_positive(const Labeling& h, const ManipulationGraph& g, NodeId x);

// Hypothesis indices consistent with one observation, by direct scan.
std::vector<std::size_t> oracle_filter(const HypothesisClass& hc, const ManipulationGraph& g,
                                       const std::vector<std::size_t>& hyps, NodeId v, Label y);

// Depth-limited search over strategic Littlestone trees: does a fully
// branched tree of the given depth shattered by the index set exist?
bool oracle_tree_exists(const HypothesisClass& hc, const ManipulationGraph& g,
                        const std::vector<std::size_t>& hyps, int depth);

// Maximum depth found by the tree search, the independent counterpart of
// sldim. -1 for an empty class.
int oracle_sldim(const HypothesisClass& hc, const ManipulationGraph& g);

// Exhaustive adversary value: the most mistakes any realizable sequence of
// the given length can force out of SSOA, searching over agents and over
// every best-response tie-break. Asserts the per-mistake dimension drop on
// every explored transition and reports a violation via the out-parameter.
int worst_case_ssoa_mistakes(const HypothesisClass& hc, const ManipulationGraph& g,
                             int rounds, bool* progress_violated = nullptr);

struct Instance {
    std::string name;
    ManipulationGraph g;
    HypothesisClass hc;
};

// Deterministic random classes: k distinct labelings over n nodes.
HypothesisClass random_class(NodeId n, std::size_t k, RandomSource& rng);

// Deterministic random digraph with independent directed edges.
ManipulationGraph random_digraph(NodeId n, double p, RandomSource& rng);

// Mixed corpus of small instances (random digraphs/named shapes, random
// classes) with n <= max_n and class sizes in [2, max_members].
std::vector<Instance> random_instances(std::size_t count, NodeId max_n,
                                       std::size_t max_members, std::uint64_t seed);

// The named shapes of the acceptance suite, with pinned classes.
std::vector<Instance> named_instances();

// Random realizable sequence: xs drawn uniformly, labels from a random
// member's effective classifier.
AgentSequence random_realizable_sequence(const HypothesisClass& hc, const ManipulationGraph& g,
                                         std::size_t T, RandomSource& rng);

// Wraps a fresh expert as a Learner so it can play a game standalone.
class ExpertLearner : public Learner {
public:
    explicit ExpertLearner(Expert expert) : expert_(std::move(expert)) {}
    const Labeling& commit() override { return expert_.commit(); }
    void observe(const Observation& obs, bool) override { expert_.advance(++t_, obs); }
    void reset() override { throw input_error("ExpertLearner cannot reset"); }
    std::string name() const override { return "expert"; }

private:
    Expert expert_;
    std::size_t t_ = 0;
};

}  // namespace slc::testing
