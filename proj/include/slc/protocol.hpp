// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "slc/adversary.hpp"
#include "slc/agnostic.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/learners.hpp"
#include "slc/transcript.hpp"

namespace slc {

/// Knobs shared by the expert-based runners.
struct RunOptions {
    TieBreakPolicy policy = TieBreakPolicy::canonical_stay();
    ExecMode exec = ExecMode::serial;
    /// Realizable graph-class runs: index of the true member graph. When
    /// absent, the sequence's uniform per-round graph is used instead.
    std::optional<std::size_t> true_member;
};

/// CLI-facing run configuration.
struct RunConfig {
    std::string learner = "ssoa";
    std::string tiebreak = "stay";
    std::string graph_path;
    std::string class_path;
    std::string graph_class_path;
    std::string sequence_path;
    std::size_t T = 1;
    std::uint64_t seed = 0;
    double gamma = 0.367879441;
    unsigned long long cap = kExpertCapDefault;
    std::optional<std::size_t> budget_N;
};

/// The core repeated game: per round the learner commits, the agent best
/// responds under the round's graph, the learner observes (v_t, y_t) and is
/// told whether it erred. Totals beyond the mistake count (opt/regret) are
/// filled by the callers that know the benchmark class.
Transcript run_game(Learner& learner, const AgentSequence& s, const ManipulationGraph& g,
                    const TieBreakPolicy& policy = TieBreakPolicy::canonical_stay());

/// Same, but each round uses the sequence's own graph (agnostic-graph play).
Transcript run_game_per_round(Learner& learner, const AgentSequence& s,
                              const TieBreakPolicy& policy = TieBreakPolicy::canonical_stay());

/// min over h in hc of the tie-break-free mistake count
/// sum_t 1{effective_label(h, g_star, x_t) != y_t}; lowest index wins ties.
std::pair<std::size_t, std::size_t> compute_opt_h(const AgentSequence& s,
                                                  const HypothesisClass& hc,
                                                  const ManipulationGraph& g_star);

/// min over members G* of gc of the rounds whose inclusive out-neighborhood
/// at x_t differs between G* and the round's graph; lowest index wins ties.
std::pair<std::size_t, std::size_t> compute_opt_g(const AgentSequence& s, const GraphClass& gc);

/// Known-graph agnostic reduction: all experts for d = sldim(hc,g), BWMV
/// under g. Throws resource_error (with the exact count) past the cap.
Transcript agnostic_runner(const HypothesisClass& hc, const ManipulationGraph& g,
                           const AgentSequence& s, double gamma, unsigned long long cap,
                           const RunOptions& opt = {});

/// Realizable graph class: per-member expert families, BWMV under the union.
/// The true graph (a member) drives the simulation and the opt_h benchmark.
Transcript graph_class_realizable_runner(const HypothesisClass& hc, const GraphClass& gc,
                                         const AgentSequence& s, double gamma,
                                         unsigned long long cap, const RunOptions& opt = {});

/// Agnostic graph class with corruption budget N: budgeted experts over the
/// union indexing, BWMV under the union; per-round graphs must be subgraphs
/// of the union.
Transcript graph_class_agnostic_runner(const HypothesisClass& hc, const GraphClass& gc,
                                       const AgentSequence& s, std::size_t budget_N,
                                       double gamma, unsigned long long cap,
                                       const RunOptions& opt = {});

/// Parameter-free wrapper: epochs k=1,2,... each run a fresh budgeted runner
/// with N_k = 2^k over the remaining rounds until its mistakes exceed
/// C * 2^k, with C = max(1, ceil(8 * Delta+ * (ln T + ln max(Delta-,1)))).
Transcript doubling_runner(const HypothesisClass& hc, const GraphClass& gc,
                           const AgentSequence& s, double gamma, unsigned long long cap,
                           const RunOptions& opt = {});

}  // namespace slc
