// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace slc {

namespace {

Transcript play(Learner& learner, const AgentSequence& s,
                const std::function<const ManipulationGraph&(std::size_t)>& graph_at,
                const std::function<int(std::size_t)>& graph_index,
                const TieBreakPolicy& policy) {
    Transcript tr;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Agent& agent = s.agents[t];
        const ManipulationGraph& g = graph_at(t);
        if (agent.x >= g.node_count()) {
            throw input_error("agent feature " + std::to_string(agent.x) +
                              " out of range for graph with n=" + std::to_string(g.node_count()));
        }
        const Labeling& committed = learner.commit();
        if (committed.size() != g.node_count()) {
            throw input_error("learner commits over n=" + std::to_string(committed.size()) +
                              " but graph has n=" + std::to_string(g.node_count()));
        }
        NodeId v = best_response(committed, g, agent.x, policy);
        Label prediction = committed[v];
        bool mistake = prediction != agent.y;

        TranscriptRow row;
        row.t = t + 1;
        row.x = agent.x;
        row.v = v;
        row.y = agent.y;
        row.prediction = prediction;
        row.mistake = mistake;
        row.graph_index = graph_index(t);
        row.classifier_digest = committed.digest_hex();
        tr.rows.push_back(std::move(row));
        if (mistake) ++tr.mistakes;

        learner.observe({v, agent.y}, mistake);
    }
    return tr;
}

}  // namespace

Transcript run_game(Learner& learner, const AgentSequence& s, const ManipulationGraph& g,
                    const TieBreakPolicy& policy) {
    return play(
        learner, s, [&](std::size_t) -> const ManipulationGraph& { return g; },
        [](std::size_t) { return -1; }, policy);
}

Transcript run_game_per_round(Learner& learner, const AgentSequence& s,
                              const TieBreakPolicy& policy) {
    if (!s.has_round_graphs()) {
        throw input_error("run_game_per_round: sequence has no per-round graphs");
    }
    return play(
        learner, s, [&](std::size_t t) -> const ManipulationGraph& { return s.graph_at(t); },
        [&](std::size_t t) { return s.round_graph[t]; }, policy);
}

std::pair<std::size_t, std::size_t> compute_opt_h(const AgentSequence& s,
                                                  const HypothesisClass& hc,
                                                  const ManipulationGraph& g_star) {
    if (hc.empty()) throw input_error("compute_opt_h: empty hypothesis class");
    std::size_t best = s.size() + 1;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < hc.size(); ++i) {
        Labeling eff = effective_labeling(hc.member(i), g_star);
        std::size_t mistakes = 0;
        for (const Agent& a : s.agents) {
            if (eff[a.x] != a.y) ++mistakes;
        }
        if (mistakes < best) {
            best = mistakes;
            best_index = i;
        }
    }
    return {best, best_index};
}

std::pair<std::size_t, std::size_t> compute_opt_g(const AgentSequence& s, const GraphClass& gc) {
    if (!s.has_round_graphs()) {
        throw input_error("compute_opt_g: sequence has no per-round graphs");
    }
    std::size_t best = s.size() + 1;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < gc.size(); ++i) {
        const ManipulationGraph& gstar = gc.member(i);
        std::size_t mismatches = 0;
        for (std::size_t t = 0; t < s.size(); ++t) {
            auto a = out_neighborhood_inclusive(gstar, s.agents[t].x);
            auto b = out_neighborhood_inclusive(s.graph_at(t), s.agents[t].x);
            if (a != b) ++mismatches;
        }
        if (mismatches < best) {
            best = mismatches;
            best_index = i;
        }
    }
    return {best, best_index};
}

namespace {

struct ExpertPool {
    std::vector<Expert> experts;
    unsigned long long count = 0;
    int d_max = 0;
};

ExpertPool build_pool_single(const HypothesisClass& hc, const ManipulationGraph& g,
                             std::size_t T, unsigned long long cap) {
    auto solver = std::make_shared<const SldimSolver>(hc, g);
    const int d = solver->dimension(solver->full_mask());
    const std::size_t delta_in = max_in_degree(g);
    ExpertPool pool;
    pool.count = count_expert_specs(T, d, delta_in);
    pool.d_max = d;
    if (pool.count > cap) {
        throw resource_error("expert count " + std::to_string(pool.count) + " exceeds cap " +
                             std::to_string(cap));
    }
    pool.experts.reserve(static_cast<std::size_t>(pool.count));
    enumerate_expert_specs(T, d, delta_in, std::nullopt, std::nullopt, 0,
                           [&](const ExpertSpec& spec) { pool.experts.emplace_back(spec, solver); },
                           cap);
    return pool;
}

ExpertPool build_pool_class(const HypothesisClass& hc, const GraphClass& gc, std::size_t T,
                            std::optional<std::size_t> budget, unsigned long long cap,
                            const std::string& context) {
    const std::size_t union_delta_in = max_in_degree(gc.union_of());
    unsigned long long total = 0;
    std::vector<std::shared_ptr<const SldimSolver>> solvers;
    std::vector<int> dims;
    std::vector<std::size_t> deltas;
    for (std::size_t i = 0; i < gc.size(); ++i) {
        auto solver = std::make_shared<const SldimSolver>(hc, gc.member(i));
        dims.push_back(solver->dimension(solver->full_mask()));
        deltas.push_back(max_in_degree(gc.member(i)));
        solvers.push_back(std::move(solver));
        unsigned long long c =
            count_expert_specs(T, dims.back(), deltas.back(), budget,
                               budget ? std::optional<std::size_t>(union_delta_in) : std::nullopt);
        total = total > std::numeric_limits<unsigned long long>::max() - c
                    ? std::numeric_limits<unsigned long long>::max()
                    : total + c;
    }
    if (total > cap) {
        throw resource_error(context + ": expert count " + std::to_string(total) +
                             " exceeds cap " + std::to_string(cap));
    }
    ExpertPool pool;
    pool.count = total;
    pool.d_max = *std::max_element(dims.begin(), dims.end());
    pool.experts.reserve(static_cast<std::size_t>(total));
    const ManipulationGraph* union_ptr = budget ? &gc.union_of() : nullptr;
    for (std::size_t i = 0; i < gc.size(); ++i) {
        enumerate_expert_specs(
            T, dims[i], deltas[i], budget,
            budget ? std::optional<std::size_t>(union_delta_in) : std::nullopt,
            static_cast<int>(i),
            [&](const ExpertSpec& spec) { pool.experts.emplace_back(spec, solvers[i], union_ptr); },
            cap);
    }
    return pool;
}

// Round loop shared by the expert-based runners. Expert rounds are numbered
// locally from 1 so doubling epochs can restart their schedules.
void run_expert_rounds(BwmvAggregator& agg, const AgentSequence& s, std::size_t first,
                       std::size_t last,
                       const std::function<const ManipulationGraph&(std::size_t)>& graph_at,
                       const std::function<int(std::size_t)>& graph_index,
                       const TieBreakPolicy& policy, Transcript& tr, std::size_t* epoch_mistakes,
                       std::size_t stop_threshold, std::size_t* stopped_at) {
    std::size_t local_t = 0;
    for (std::size_t t = first; t < last; ++t) {
        ++local_t;
        const Agent& agent = s.agents[t];
        const ManipulationGraph& g = graph_at(t);
        const Labeling& committed = agg.commit();
        NodeId v = best_response(committed, g, agent.x, policy);
        Label prediction = committed[v];
        bool mistake = prediction != agent.y;

        TranscriptRow row;
        row.t = t + 1;
        row.x = agent.x;
        row.v = v;
        row.y = agent.y;
        row.prediction = prediction;
        row.mistake = mistake;
        row.graph_index = graph_index(t);
        row.classifier_digest = committed.digest_hex();
        tr.rows.push_back(std::move(row));
        if (mistake) {
            ++tr.mistakes;
            if (epoch_mistakes) ++*epoch_mistakes;
        }

        agg.update({v, agent.y}, committed, mistake);
        agg.advance_experts(local_t, {v, agent.y});

        if (epoch_mistakes && *epoch_mistakes > stop_threshold) {
            *stopped_at = t + 1;
            return;
        }
    }
    if (stopped_at) *stopped_at = last;
}

void append_decay_log(Transcript& tr, const BwmvAggregator& agg) {
    tr.weight_decay.insert(tr.weight_decay.end(), agg.decay_log().begin(),
                           agg.decay_log().end());
}

double euler() { return std::exp(1.0); }

}  // namespace

Transcript agnostic_runner(const HypothesisClass& hc, const ManipulationGraph& g,
                           const AgentSequence& s, double gamma, unsigned long long cap,
                           const RunOptions& opt) {
    ExpertPool pool = build_pool_single(hc, g, s.size(), cap);
    BwmvAggregator agg(std::move(pool.experts), g, gamma, opt.exec);

    Transcript tr;
    run_expert_rounds(
        agg, s, 0, s.size(), [&](std::size_t) -> const ManipulationGraph& { return g; },
        [](std::size_t) { return -1; }, opt.policy, tr, nullptr, 0, nullptr);

    auto [opt_h, opt_h_idx] = compute_opt_h(s, hc, g);
    tr.set_opt_h(opt_h, opt_h_idx);
    append_decay_log(tr, agg);
    tr.experts = ExpertSetSummary{pool.count, pool.d_max, static_cast<std::size_t>(cap)};

    const double rhs = euler() * (static_cast<double>(max_out_degree(g)) + 2.0) *
                       (static_cast<double>(opt_h) + pool.d_max +
                        std::log(static_cast<double>(pool.count)));
    tr.bounds.push_back({"regret <= e*(deg_out+2)*(opt_h + sldim + ln|E|)",
                         static_cast<double>(*tr.regret), rhs,
                         static_cast<double>(*tr.regret) <= rhs});
    return tr;
}

namespace {

const ManipulationGraph& resolve_true_graph(const GraphClass& gc, const AgentSequence& s,
                                            const RunOptions& opt) {
    if (opt.true_member) {
        if (*opt.true_member >= gc.size()) {
            throw input_error("true graph index out of range");
        }
        return gc.member(*opt.true_member);
    }
    if (!s.has_round_graphs()) {
        throw input_error("realizable graph-class run needs the true graph: set true_member "
                          "or give the sequence uniform per-round graphs");
    }
    const int idx = s.round_graph.front();
    for (int r : s.round_graph) {
        if (r != idx) {
            throw input_error("realizable graph-class run requires one graph on every round");
        }
    }
    const ManipulationGraph& g = s.graph_pool.at(static_cast<std::size_t>(idx));
    for (std::size_t i = 0; i < gc.size(); ++i) {
        if (gc.member(i) == g) return gc.member(i);
    }
    throw input_error("the sequence's graph is not a member of the graph class");
}

}  // namespace

Transcript graph_class_realizable_runner(const HypothesisClass& hc, const GraphClass& gc,
                                         const AgentSequence& s, double gamma,
                                         unsigned long long cap, const RunOptions& opt) {
    const ManipulationGraph& g_true = resolve_true_graph(gc, s, opt);
    ExpertPool pool = build_pool_class(hc, gc, s.size(), std::nullopt, cap, "realizable runner");
    BwmvAggregator agg(std::move(pool.experts), gc.union_of(), gamma, opt.exec);

    Transcript tr;
    run_expert_rounds(
        agg, s, 0, s.size(), [&](std::size_t) -> const ManipulationGraph& { return g_true; },
        [](std::size_t) { return -1; }, opt.policy, tr, nullptr, 0, nullptr);

    auto [opt_h, opt_h_idx] = compute_opt_h(s, hc, g_true);
    tr.set_opt_h(opt_h, opt_h_idx);
    append_decay_log(tr, agg);
    tr.experts = ExpertSetSummary{pool.count, pool.d_max, static_cast<std::size_t>(cap)};

    const double rhs = euler() * (static_cast<double>(gc.max_out_degree_union()) + 2.0) *
                       (static_cast<double>(opt_h) + pool.d_max +
                        std::log(static_cast<double>(pool.count)));
    tr.bounds.push_back({"regret <= e*(deg_union+2)*(opt_h + d_max + ln|E|)",
                         static_cast<double>(*tr.regret), rhs,
                         static_cast<double>(*tr.regret) <= rhs});
    return tr;
}

namespace {

void check_rounds_subgraphs(const AgentSequence& s, const ManipulationGraph& g_union) {
    for (const ManipulationGraph& g : s.graph_pool) {
        if (g.node_count() != g_union.node_count()) {
            throw input_error("per-round graph node count differs from the class");
        }
        for (const auto& [u, v] : g.edges()) {
            if (!g_union.has_edge(u, v)) {
                throw input_error("per-round graph has edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ") outside the class union");
            }
        }
    }
}

}  // namespace

Transcript graph_class_agnostic_runner(const HypothesisClass& hc, const GraphClass& gc,
                                       const AgentSequence& s, std::size_t budget_N,
                                       double gamma, unsigned long long cap,
                                       const RunOptions& opt) {
    if (!s.has_round_graphs()) {
        throw input_error("agnostic graph-class run requires per-round graphs");
    }
    check_rounds_subgraphs(s, gc.union_of());
    ExpertPool pool = build_pool_class(hc, gc, s.size(), budget_N, cap, "agnostic runner");
    BwmvAggregator agg(std::move(pool.experts), gc.union_of(), gamma, opt.exec);

    Transcript tr;
    run_expert_rounds(
        agg, s, 0, s.size(), [&](std::size_t t) -> const ManipulationGraph& { return s.graph_at(t); },
        [&](std::size_t t) { return s.round_graph[t]; }, opt.policy, tr, nullptr, 0, nullptr);

    auto [opt_g, opt_g_idx] = compute_opt_g(s, gc);
    tr.opt_g = opt_g;
    tr.opt_g_index = opt_g_idx;
    auto [opt_h, opt_h_idx] = compute_opt_h(s, hc, gc.member(opt_g_idx));
    tr.set_opt_h(opt_h, opt_h_idx);
    append_decay_log(tr, agg);
    tr.experts = ExpertSetSummary{pool.count, pool.d_max, static_cast<std::size_t>(cap)};

    const double rhs = euler() * (static_cast<double>(gc.max_out_degree_union()) + 2.0) *
                       (static_cast<double>(opt_h) + pool.d_max + static_cast<double>(budget_N) +
                        std::log(static_cast<double>(pool.count)));
    tr.bounds.push_back({"regret <= e*(deg_union+2)*(opt_h + d_max + N + ln|E|)",
                         static_cast<double>(*tr.regret), rhs,
                         static_cast<double>(*tr.regret) <= rhs});
    return tr;
}

Transcript doubling_runner(const HypothesisClass& hc, const GraphClass& gc,
                           const AgentSequence& s, double gamma, unsigned long long cap,
                           const RunOptions& opt) {
    if (!s.has_round_graphs()) {
        throw input_error("doubling run requires per-round graphs");
    }
    check_rounds_subgraphs(s, gc.union_of());
    const std::size_t T = s.size();
    const double delta_plus = static_cast<double>(gc.max_out_degree_union());
    const double delta_minus =
        static_cast<double>(std::max<std::size_t>(max_in_degree(gc.union_of()), 1));
    const std::size_t C = static_cast<std::size_t>(std::max(
        1.0, std::ceil(8.0 * delta_plus * (std::log(static_cast<double>(T)) +
                                           std::log(delta_minus)))));

    Transcript tr;
    std::size_t cursor = 0;
    int k = 0;
    int d_max = 0;
    unsigned long long total_experts = 0;
    while (cursor < T) {
        ++k;
        const std::size_t budget = std::size_t{1} << k;
        const std::size_t threshold = C * budget;
        ExpertPool pool = build_pool_class(hc, gc, T - cursor, budget, cap,
                                           "doubling epoch " + std::to_string(k));
        d_max = std::max(d_max, pool.d_max);
        total_experts += pool.count;
        BwmvAggregator agg(std::move(pool.experts), gc.union_of(), gamma, opt.exec);

        EpochInfo epoch;
        epoch.k = k;
        epoch.budget = budget;
        epoch.first_round = cursor + 1;
        epoch.threshold = threshold;
        std::size_t epoch_mistakes = 0;
        std::size_t stopped_at = cursor;
        run_expert_rounds(
            agg, s, cursor, T,
            [&](std::size_t t) -> const ManipulationGraph& { return s.graph_at(t); },
            [&](std::size_t t) { return s.round_graph[t]; }, opt.policy, tr, &epoch_mistakes,
            threshold, &stopped_at);
        append_decay_log(tr, agg);
        epoch.last_round = stopped_at;
        epoch.mistakes = epoch_mistakes;
        tr.epochs.push_back(epoch);
        cursor = stopped_at;
    }

    auto [opt_g, opt_g_idx] = compute_opt_g(s, gc);
    tr.opt_g = opt_g;
    tr.opt_g_index = opt_g_idx;
    auto [opt_h, opt_h_idx] = compute_opt_h(s, hc, gc.member(opt_g_idx));
    tr.set_opt_h(opt_h, opt_h_idx);
    tr.experts = ExpertSetSummary{total_experts, d_max, static_cast<std::size_t>(cap)};

    const double n_star = static_cast<double>(opt_h) + static_cast<double>(opt_g) + d_max +
                          std::log(static_cast<double>(gc.size())) + 1.0;
    const double epoch_bound = std::ceil(std::log2(n_star)) + 1.0;
    tr.bounds.push_back({"epochs <= ceil(log2(opt_h + opt_g + d + ln|G| + 1)) + 1",
                         static_cast<double>(k), epoch_bound,
                         static_cast<double>(k) <= epoch_bound});
    const double mistake_bound =
        static_cast<double>(C) * std::pow(2.0, k + 1) + static_cast<double>(k);
    tr.bounds.push_back({"mistakes <= C*2^(k_final+1) + k_final",
                         static_cast<double>(tr.mistakes), mistake_bound,
                         static_cast<double>(tr.mistakes) <= mistake_bound});
    return tr;
}

}  // namespace slc
