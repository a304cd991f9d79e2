// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/learners.hpp"

namespace slc {

inline constexpr unsigned long long kExpertCapDefault = 1'000'000;

/// Guess schedule of one expert: at round i_k it treats the observation as a
/// mistake whose original feature is the r_k-th in-neighbor of the observed
/// node (under its belief graph; under the union graph at corruption rounds
/// in the budgeted variant).
struct ExpertSpec {
    std::vector<std::size_t> mistake_rounds;      // 1-based, strictly increasing
    std::vector<std::size_t> direction_indices;   // in {0..delta_in}
    std::vector<std::size_t> corruption_rounds;   // budgeted variant only
    std::vector<std::size_t> corruption_directions;
    int belief_graph = 0;

    bool operator==(const ExpertSpec& other) const = default;
};

/// Number of specs the enumeration yields:
///   sum_{m<=d} C(T,m) * (delta_in+1)^m,
/// times sum_{n<=N} C(T,n) * (union_delta_in+1)^n when a budget is present.
/// Saturates instead of overflowing.
unsigned long long count_expert_specs(std::size_t T, int d, std::size_t delta_in,
                                      std::optional<std::size_t> budget_N = std::nullopt,
                                      std::optional<std::size_t> union_delta_in = std::nullopt);

/// Yields every spec exactly once, lexicographic in
/// (m, i_1..i_m, r_1..r_m, n, i'_1..i'_n, r'_1..r'_n). Throws resource_error
/// naming the count when it exceeds cap.
void enumerate_expert_specs(std::size_t T, int d, std::size_t delta_in,
                            std::optional<std::size_t> budget_N,
                            std::optional<std::size_t> union_delta_in, int graph_index,
                            const std::function<void(const ExpertSpec&)>& yield,
                            unsigned long long cap = kExpertCapDefault);

/// A wrapped SSOA instance that updates only at its designated rounds,
/// feeding itself the forced-mistake observation derived from its guess.
/// An expert whose guessed in-neighbor index does not exist goes inert for
/// the rest of the run (its commit freezes).
class Expert {
public:
    Expert(ExpertSpec spec, std::shared_ptr<const SldimSolver> solver,
           const ManipulationGraph* union_graph = nullptr);

    const Labeling& commit() const { return core_.commit(); }
    void advance(std::size_t t, const Observation& obs);
    bool inert() const { return inert_; }
    const ExpertSpec& spec() const { return spec_; }
    const MemberMask& version() const { return core_.version(); }

private:
    ExpertSpec spec_;
    std::shared_ptr<const SldimSolver> solver_;  // belief graph lives here
    const ManipulationGraph* union_;             // nullptr outside the budgeted variant
    mutable SsoaCore core_;
    std::size_t next_mistake_ = 0;
    std::size_t next_corruption_ = 0;
    bool inert_ = false;
};

/// Processes round t: returns the commit the expert used at t, then folds in
/// the observation.
Labeling expert_step(Expert& e, std::size_t t, const Observation& obs);

enum class ExecMode { serial, parallel };

/// Biased Weighted Majority Vote over an expert pool: a node is committed
/// positive when the experts voting positive there hold at least a
/// 1/(Delta+ + 2) share of the total weight; on a mistake the experts that
/// voted wrong (false positive at v_t, or all-negative on the still-negative
/// part of N+[v_t] for a false negative) are decayed by gamma.
///
/// Per-round expert stepping and the vote accumulation are data-parallel;
/// `ExecMode::serial` keeps the reference single-threaded path, and both
/// modes produce bit-identical results (per-node sums always run in expert
/// order).
class BwmvAggregator {
public:
    BwmvAggregator(std::vector<Expert> experts, const ManipulationGraph& g_vote, double gamma,
                   ExecMode exec = ExecMode::serial);

    const Labeling& commit();
    /// Applies the penalty rule; no-op unless made_mistake. `committed` must
    /// be the labeling returned by commit() this round.
    void update(const Observation& obs, const Labeling& committed, bool made_mistake);
    void advance_experts(std::size_t t, const Observation& obs);

    std::size_t expert_count() const { return experts_.size(); }
    double total_weight() const { return total_weight_; }
    double weight(std::size_t i) const { return weights_[i]; }
    const Labeling& expert_commit(std::size_t i) const { return experts_[i].commit(); }
    const std::vector<std::pair<double, double>>& decay_log() const { return decay_log_; }
    /// Experts decayed by the most recent mistake update.
    const std::vector<std::size_t>& last_penalized() const { return last_penalized_; }
    std::size_t vote_max_out_degree() const { return delta_plus_; }

private:
    double recompute_total() const;

    void refresh_commit_ptrs();

    std::vector<Expert> experts_;
    std::vector<const Labeling*> commit_ptrs_;  // flat per-round vote view
    const ManipulationGraph* g_vote_;
    double gamma_;
    ExecMode exec_;
    std::size_t delta_plus_;
    std::vector<double> weights_;
    double total_weight_;
    std::size_t updates_since_check_ = 0;
    Labeling committed_;
    std::vector<std::pair<double, double>> decay_log_;
    std::vector<std::size_t> last_penalized_;
};

}  // namespace slc
