// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/agnostic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slc {

namespace {

constexpr unsigned long long kSaturated = std::numeric_limits<unsigned long long>::max();

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

unsigned long long sat_add(unsigned long long a, unsigned long long b) {
    if (a > kSaturated - b) return kSaturated;
    return a + b;
}

// sum_{m<=d} C(T,m) * base^m with saturation.
unsigned long long spec_family_count(std::size_t T, int d, std::size_t base) {
    unsigned long long total = 0;
    unsigned long long binom = 1;  // C(T,0)
    unsigned long long power = 1;  // base^0
    const int mmax = std::min<int>(d, static_cast<int>(T));
    for (int m = 0; m <= mmax; ++m) {
        if (m > 0) {
            binom = sat_mul(binom, T - static_cast<std::size_t>(m) + 1);
            if (binom != kSaturated) binom /= static_cast<unsigned long long>(m);
            power = sat_mul(power, base);
        }
        total = sat_add(total, sat_mul(binom, power));
    }
    return total;
}

// Lexicographic visit of all (i_{1:m}, r_{1:m}) pairs for every m <= d.
template <typename Fn>
void visit_round_guesses(std::size_t T, int d, std::size_t delta_in, Fn&& fn) {
    const std::size_t radix = delta_in + 1;
    const int mmax = std::min<int>(d, static_cast<int>(T));
    std::vector<std::size_t> rounds;
    std::vector<std::size_t> dirs;

    auto emit_dirs = [&](auto&& self, std::size_t pos) -> void {
        if (pos == rounds.size()) {
            fn(rounds, dirs);
            return;
        }
        for (std::size_t r = 0; r < radix; ++r) {
            dirs[pos] = r;
            self(self, pos + 1);
        }
    };
    auto emit_rounds = [&](auto&& self, std::size_t next, std::size_t remaining) -> void {
        if (remaining == 0) {
            dirs.assign(rounds.size(), 0);
            emit_dirs(emit_dirs, 0);
            return;
        }
        for (std::size_t i = next; i + remaining <= T + 1; ++i) {
            rounds.push_back(i);
            self(self, i + 1, remaining - 1);
            rounds.pop_back();
        }
    };
    for (int m = 0; m <= mmax; ++m) {
        emit_rounds(emit_rounds, 1, static_cast<std::size_t>(m));
    }
}

}  // namespace

unsigned long long count_expert_specs(std::size_t T, int d, std::size_t delta_in,
                                      std::optional<std::size_t> budget_N,
                                      std::optional<std::size_t> union_delta_in) {
    if (T < 1) throw input_error("count_expert_specs: T must be >= 1");
    if (d < 0) throw input_error("count_expert_specs: d must be >= 0");
    unsigned long long total = spec_family_count(T, d, delta_in + 1);
    if (budget_N) {
        const std::size_t udelta = union_delta_in.value_or(delta_in);
        total = sat_mul(total, spec_family_count(T, static_cast<int>(*budget_N), udelta + 1));
    }
    return total;
}

void enumerate_expert_specs(std::size_t T, int d, std::size_t delta_in,
                            std::optional<std::size_t> budget_N,
                            std::optional<std::size_t> union_delta_in, int graph_index,
                            const std::function<void(const ExpertSpec&)>& yield,
                            unsigned long long cap) {
    const unsigned long long count = count_expert_specs(T, d, delta_in, budget_N, union_delta_in);
    if (count > cap) {
        throw resource_error("expert enumeration would yield " +
                             (count == kSaturated ? std::string(">1e19")
                                                  : std::to_string(count)) +
                             " specs, above the cap " + std::to_string(cap));
    }
    visit_round_guesses(T, d, delta_in, [&](const std::vector<std::size_t>& rounds,
                                            const std::vector<std::size_t>& dirs) {
        ExpertSpec spec;
        spec.mistake_rounds = rounds;
        spec.direction_indices = dirs;
        spec.belief_graph = graph_index;
        if (!budget_N) {
            yield(spec);
            return;
        }
        const std::size_t udelta = union_delta_in.value_or(delta_in);
        visit_round_guesses(T, static_cast<int>(*budget_N), udelta,
                            [&](const std::vector<std::size_t>& crounds,
                                const std::vector<std::size_t>& cdirs) {
                                ExpertSpec full = spec;
                                full.corruption_rounds = crounds;
                                full.corruption_directions = cdirs;
                                yield(full);
                            });
    });
}

Expert::Expert(ExpertSpec spec, std::shared_ptr<const SldimSolver> solver,
               const ManipulationGraph* union_graph)
    : spec_(std::move(spec)), solver_(std::move(solver)), union_(union_graph),
      core_(solver_) {
    if (!spec_.corruption_rounds.empty() && union_ == nullptr) {
        throw input_error("budgeted expert spec requires the union graph");
    }
}

void Expert::advance(std::size_t t, const Observation& obs) {
    if (inert_) return;
    if (next_mistake_ >= spec_.mistake_rounds.size() ||
        spec_.mistake_rounds[next_mistake_] != t) {
        return;
    }
    std::size_t direction = spec_.direction_indices[next_mistake_];
    ++next_mistake_;

    // At a designated round that is also a corruption round, the guess is
    // indexed under the union graph with the corruption direction instead.
    const ManipulationGraph* index_graph = &solver_->graph();
    while (next_corruption_ < spec_.corruption_rounds.size() &&
           spec_.corruption_rounds[next_corruption_] < t) {
        ++next_corruption_;
    }
    if (next_corruption_ < spec_.corruption_rounds.size() &&
        spec_.corruption_rounds[next_corruption_] == t) {
        index_graph = union_;
        direction = spec_.corruption_directions[next_corruption_];
        ++next_corruption_;
    }

    std::optional<NodeId> guess = in_neighbor_by_index(*index_graph, obs.v, direction);
    if (!guess) {
        inert_ = true;
        return;
    }
    const Labeling& h = core_.commit();
    NodeId vhat = best_response(h, solver_->graph(), *guess, TieBreakPolicy::canonical_stay());
    core_.update({vhat, flip(h[vhat])});
}

Labeling expert_step(Expert& e, std::size_t t, const Observation& obs) {
    Labeling used = e.commit();
    e.advance(t, obs);
    return used;
}

BwmvAggregator::BwmvAggregator(std::vector<Expert> experts, const ManipulationGraph& g_vote,
                               double gamma, ExecMode exec)
    : experts_(std::move(experts)), g_vote_(&g_vote), gamma_(gamma), exec_(exec),
      delta_plus_(max_out_degree(g_vote)) {
    if (experts_.empty()) throw input_error("BWMV requires at least one expert");
    if (!(gamma > 0.0 && gamma < 1.0)) throw input_error("gamma must lie in (0,1)");
    weights_.assign(experts_.size(), 1.0);
    total_weight_ = static_cast<double>(experts_.size());
    committed_ = Labeling::constant(g_vote.node_count(), Label::negative);
    commit_ptrs_.assign(experts_.size(), nullptr);
    refresh_commit_ptrs();
}

void BwmvAggregator::refresh_commit_ptrs() {
    const std::int64_t count = static_cast<std::int64_t>(experts_.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec_ == ExecMode::parallel)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
        commit_ptrs_[static_cast<std::size_t>(i)] =
            &experts_[static_cast<std::size_t>(i)].commit();
    }
}

double BwmvAggregator::recompute_total() const {
    double sum = 0.0;
    for (double w : weights_) sum += w;
    return sum;
}

const Labeling& BwmvAggregator::commit() {
    const NodeId n = g_vote_->node_count();
    const double threshold = total_weight_ / static_cast<double>(delta_plus_ + 2);
    const std::int64_t count = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec_ == ExecMode::parallel)
#endif
    for (std::int64_t vi = 0; vi < count; ++vi) {
        const NodeId v = static_cast<NodeId>(vi);
        double positive = 0.0;
        for (std::size_t i = 0; i < commit_ptrs_.size(); ++i) {
            if (commit_ptrs_[i]->is_positive(v)) positive += weights_[i];
        }
        committed_.set(v, positive >= threshold ? Label::positive : Label::negative);
    }
    return committed_;
}

void BwmvAggregator::update(const Observation& obs, const Labeling& committed,
                            bool made_mistake) {
    last_penalized_.clear();
    if (!made_mistake) return;
    const double before = total_weight_;
    if (obs.y == Label::negative) {
        // False positive: decay everyone who voted positive at v_t.
        for (std::size_t i = 0; i < experts_.size(); ++i) {
            if (commit_ptrs_[i]->is_positive(obs.v)) {
                total_weight_ -= weights_[i] * (1.0 - gamma_);
                weights_[i] *= gamma_;
                last_penalized_.push_back(i);
            }
        }
    } else {
        // False negative: decay everyone who labels all still-negative
        // out-neighbors of v_t as negative.
        std::vector<NodeId> nhat;
        for (NodeId x : out_neighborhood_inclusive(*g_vote_, obs.v)) {
            if (!committed.is_positive(x)) nhat.push_back(x);
        }
        for (std::size_t i = 0; i < experts_.size(); ++i) {
            const Labeling& vote = *commit_ptrs_[i];
            bool all_negative = true;
            for (NodeId x : nhat) {
                if (vote.is_positive(x)) {
                    all_negative = false;
                    break;
                }
            }
            if (all_negative) {
                total_weight_ -= weights_[i] * (1.0 - gamma_);
                weights_[i] *= gamma_;
                last_penalized_.push_back(i);
            }
        }
    }
    decay_log_.emplace_back(before, total_weight_);
    if (++updates_since_check_ >= 64) {
        // Drift guard: the running total must track the exact sum.
        total_weight_ = recompute_total();
        updates_since_check_ = 0;
    }
}

void BwmvAggregator::advance_experts(std::size_t t, const Observation& obs) {
    const std::int64_t count = static_cast<std::int64_t>(experts_.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec_ == ExecMode::parallel)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
        // Refreshing the flat view here keeps the vote loop read-only.
        experts_[static_cast<std::size_t>(i)].advance(t, obs);
        commit_ptrs_[static_cast<std::size_t>(i)] =
            &experts_[static_cast<std::size_t>(i)].commit();
    }
}

}  // namespace slc
