// Copyright 2026 slcsim authors
// License: Apache-2.0
//
// Benchmarks the per-round expert kernels (vote accumulation and expert
// stepping) serial vs OpenMP on one corrupted instance, and checks the two
// paths produce identical transcripts.

#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#include "slc/adversary.hpp"
#include "slc/agnostic.hpp"
#include "slc/protocol.hpp"
#include "slc/serialize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace slc;

namespace {

struct RoundResult {
    double build_seconds = 0;
    double round_seconds = 0;
    std::size_t mistakes = 0;
    std::string csv;
    std::vector<std::pair<double, double>> decay;
};

RoundResult run(const HypothesisClass& hc, const ManipulationGraph& g, const AgentSequence& s,
                ExecMode exec) {
    using clock = std::chrono::steady_clock;
    RoundResult out;

    auto t0 = clock::now();
    auto solver = std::make_shared<const SldimSolver>(hc, g);
    const int d = solver->dimension(solver->full_mask());
    std::vector<Expert> experts;
    experts.reserve(static_cast<std::size_t>(
        count_expert_specs(s.size(), d, max_in_degree(g))));
    enumerate_expert_specs(s.size(), d, max_in_degree(g), std::nullopt, std::nullopt, 0,
                           [&](const ExpertSpec& spec) { experts.emplace_back(spec, solver); },
                           100'000'000ull);
    BwmvAggregator agg(std::move(experts), g, 1.0 / std::exp(1.0), exec);
    out.build_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    Transcript tr;
    t0 = clock::now();
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Agent& agent = s.agents[t];
        const Labeling& committed = agg.commit();
        NodeId v = best_response(committed, g, agent.x, TieBreakPolicy::canonical_stay());
        Label prediction = committed[v];
        bool mistake = prediction != agent.y;
        TranscriptRow row;
        row.t = t + 1;
        row.x = agent.x;
        row.v = v;
        row.y = agent.y;
        row.prediction = prediction;
        row.mistake = mistake;
        row.classifier_digest = committed.digest_hex();
        tr.rows.push_back(std::move(row));
        if (mistake) ++tr.mistakes;
        agg.update({v, agent.y}, committed, mistake);
        agg.advance_experts(t + 1, {v, agent.y});
    }
    out.round_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.mistakes = tr.mistakes;
    out.csv = transcript_to_csv(tr);
    out.decay = agg.decay_log();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    NodeId n = 7;
    std::size_t T = 10;
    if (argc > 1) n = static_cast<NodeId>(std::stoul(argv[1]));
    if (argc > 2) T = std::stoul(argv[2]);

    auto g = random_gnp(n, 0.5, 12345);
    auto hc = all_functions_class(std::min<NodeId>(n, 8));
    RandomSource rng(99);
    std::vector<NodeId> xs(T);
    for (auto& x : xs) x = static_cast<NodeId>(rng.next_index(n));
    auto seq = realizable_sequence(rng.next_index(hc.size()), hc, g, xs);
    RandomSource cr(7);
    auto corrupted = corrupt_labels(seq, std::min<std::size_t>(2, T), cr);

#ifdef _OPENMP
    std::cout << "threads=" << omp_get_max_threads() << "\n";
#else
    std::cout << "threads=1 (built without OpenMP)\n";
#endif
    std::cout << "n=" << n << " T=" << T << " experts="
              << count_expert_specs(T, sldim(hc, g).value_or(0), max_in_degree(g)) << "\n";

    auto serial = run(hc, g, corrupted, ExecMode::serial);
    auto parallel = run(hc, g, corrupted, ExecMode::parallel);

    const bool identical = serial.csv == parallel.csv && serial.decay == parallel.decay;
    std::cout << "serial:   build " << serial.build_seconds << " s, rounds "
              << serial.round_seconds << " s, mistakes=" << serial.mistakes << "\n";
    std::cout << "parallel: build " << parallel.build_seconds << " s, rounds "
              << parallel.round_seconds << " s, mistakes=" << parallel.mistakes << "\n";
    std::cout << "round-kernel speedup: "
              << (parallel.round_seconds > 0 ? serial.round_seconds / parallel.round_seconds
                                             : 0.0)
              << "x\n";
    std::cout << "outputs identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
