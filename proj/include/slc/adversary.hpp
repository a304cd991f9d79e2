// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/learners.hpp"
#include "slc/transcript.hpp"

namespace slc {

/// Pre-manipulation feature plus true label.
struct Agent {
    NodeId x = 0;
    Label y = Label::positive;
};

struct RealizabilityCertificate {
    std::size_t hypothesis_index = 0;
    std::vector<Label> effective_labels;  // per round, must equal the true labels
};

/// A round-indexed agent sequence, optionally with per-round manipulation
/// graphs for the agnostic-graph setting (round_graph indexes graph_pool).
struct AgentSequence {
    std::vector<Agent> agents;
    std::vector<ManipulationGraph> graph_pool;
    std::vector<int> round_graph;  // empty, or one pool index per round
    std::optional<RealizabilityCertificate> certificate;
    std::vector<std::size_t> corrupted_rounds;  // metadata from corrupt ops

    std::size_t size() const { return agents.size(); }
    bool has_round_graphs() const { return !round_graph.empty(); }
    const ManipulationGraph& graph_at(std::size_t t) const {
        return graph_pool.at(static_cast<std::size_t>(round_graph.at(t)));
    }
};

/// Checks a certificate: the named hypothesis's effective classifier under g
/// must reproduce every true label.
bool certificate_valid(const AgentSequence& s, const HypothesisClass& hc,
                       const ManipulationGraph& g);

struct AdversaryOutcome {
    AgentSequence sequence;
    RealizabilityCertificate certificate;
    Transcript transcript;
};

/// Plays depth(witness) rounds against a deterministic learner, forcing a
/// mistake every round: takes the false-negative edge when the learner
/// labels all of N+[x'] negative, otherwise a false-positive edge at the
/// lowest positively labeled neighbor. Original features are reverse-
/// engineered afterwards from a hypothesis consistent with the walked path
/// (lowest class index; per round the lowest qualifying in-neighbor), so
/// the transcript's x fields are backfilled and were never shown to the
/// learner. Calling this with a randomized learner violates the contract
/// and is not detected.
AdversaryOutcome lower_bound_adversary(const SLTreeWitness& witness, Learner& learner,
                                       const HypothesisClass& hc, const ManipulationGraph& g);

/// Same walk against the solver's lazily expanded witness, for instances
/// whose materialized tree would be too large.
AdversaryOutcome lower_bound_adversary(const SldimSolver& solver, Learner& learner);

/// Labels each x by the effective classifier of member h_star_index and
/// attaches the certificate.
AgentSequence realizable_sequence(std::size_t h_star_index, const HypothesisClass& hc,
                                  const ManipulationGraph& g, std::span<const NodeId> xs);

/// Flips exactly k labels at distinct rng-chosen rounds. Drops any
/// certificate; records the corrupted rounds.
AgentSequence corrupt_labels(const AgentSequence& s, std::size_t k, RandomSource& rng);

/// Assigns an rng-chosen variant graph to exactly k distinct rounds and the
/// base graph elsewhere: pool index 0 is g_base, 1+j is variants[j].
AgentSequence corrupt_graphs(const AgentSequence& s, const ManipulationGraph& g_base,
                             std::span<const ManipulationGraph> variants, std::size_t k,
                             RandomSource& rng);

}  // namespace slc
