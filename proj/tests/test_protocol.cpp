// Copyright 2026 slcsim authors
// License: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "slc/protocol.hpp"
#include "slc/serialize.hpp"
#include "support/oracles.hpp"

using namespace slc;

namespace {

// Commits one fixed labeling forever.
class FixedLearner : public Learner {
public:
    explicit FixedLearner(Labeling h) : h_(std::move(h)) {}
    const Labeling& commit() override { return h_; }
    void observe(const Observation&, bool) override {}
    void reset() override {}
    std::string name() const override { return "fixed"; }

private:
    Labeling h_;
};

}  // namespace

TEST_CASE("run_game basics") {
    auto g = star(2);
    auto points = point_functions_class(2);
    RandomSource rng(3);
    auto seq = slc::testing::random_realizable_sequence(points, g, 6, rng);

    auto c = constant_learner(3, Label::negative);
    auto tr = run_game(*c, seq, g);
    for (const auto& row : tr.rows) CHECK(row.v == row.x);  // nobody manipulates
    CHECK(tr.rows.size() == 6);

    auto [opt, idx] = compute_opt_h(seq, points, g);
    CHECK(opt == 0);
    tr.set_opt_h(opt, idx);
    CHECK(*tr.regret == static_cast<long long>(tr.mistakes));
}

TEST_CASE("fixed-hypothesis learner reproduces compute_opt_h per round") {
    RandomSource rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const NodeId n = static_cast<NodeId>(2 + rng.next_index(3));
        auto g = slc::testing::random_digraph(n, 0.6, rng);
        auto hc = slc::testing::random_class(n, 4, rng);
        auto seq = slc::testing::random_realizable_sequence(hc, g, 6, rng);
        RandomSource cr(rep);
        auto corrupted = corrupt_labels(seq, 2, cr);

        for (std::size_t i = 0; i < hc.size(); ++i) {
            Labeling eff = effective_labeling(hc.member(i), g);
            std::size_t expected = 0;
            for (const auto& a : corrupted.agents) {
                if (eff[a.x] != a.y) ++expected;
            }
            auto policies = {TieBreakPolicy::canonical_stay(), TieBreakPolicy::lowest_id(),
                             TieBreakPolicy::callback([](NodeId, std::span<const NodeId> br) {
                                 return br.back();
                             })};
            for (const auto& p : policies) {
                FixedLearner fixed(hc.member(i));
                CHECK(run_game(fixed, corrupted, g, p).mistakes == expected);
            }
        }
    }
}

TEST_CASE("regret identity on agnostic runs") {
    RandomSource rng(19);
    auto g = random_gnp(3, 0.5, 8);
    auto hc = slc::testing::random_class(3, 4, rng);
    auto seq = slc::testing::random_realizable_sequence(hc, g, 5, rng);
    RandomSource cr(2);
    auto corrupted = corrupt_labels(seq, 1, cr);
    auto tr = agnostic_runner(hc, g, corrupted, 1.0 / std::exp(1.0), 100000);
    REQUIRE(tr.opt_h.has_value());
    CHECK(*tr.regret == static_cast<long long>(tr.mistakes) -
                            static_cast<long long>(*tr.opt_h));
    REQUIRE(!tr.bounds.empty());
    CHECK(tr.bounds[0].pass);
    REQUIRE(tr.experts.has_value());
    CHECK(tr.experts->count > 0);
}

TEST_CASE("agnostic runner on a single round") {
    auto points = point_functions_class(2);
    auto g = star(2);
    AgentSequence s;
    s.agents = {{1, Label::positive}};
    auto tr = agnostic_runner(points, g, s, 1.0 / std::exp(1.0), 10000);
    CHECK(tr.mistakes <= 1);
}

TEST_CASE("serial and parallel execution produce identical transcripts") {
    RandomSource rng(23);
    auto g = random_gnp(4, 0.5, 12);
    auto hc = slc::testing::random_class(4, 5, rng);
    auto seq = slc::testing::random_realizable_sequence(hc, g, 6, rng);
    RandomSource cr(3);
    auto corrupted = corrupt_labels(seq, 2, cr);

    RunOptions serial;
    serial.exec = ExecMode::serial;
    RunOptions parallel;
    parallel.exec = ExecMode::parallel;
    auto a = agnostic_runner(hc, g, corrupted, 1.0 / std::exp(1.0), 500000, serial);
    auto b = agnostic_runner(hc, g, corrupted, 1.0 / std::exp(1.0), 500000, parallel);
    CHECK(transcript_to_csv(a) == transcript_to_csv(b));
    CHECK(a.weight_decay == b.weight_decay);
    CHECK(a.mistakes == b.mistakes);
}

TEST_CASE("degenerate graph class equals the single-graph runner") {
    auto points = point_functions_class(3);
    auto g = star(3);
    RandomSource rng(29);
    auto seq = slc::testing::random_realizable_sequence(points, g, 5, rng);

    GraphClass gc({g});
    AgentSequence with_graphs = seq;
    with_graphs.graph_pool = {g};
    with_graphs.round_graph.assign(seq.size(), 0);

    auto single = agnostic_runner(points, g, seq, 1.0 / std::exp(1.0), 500000);
    auto classed =
        graph_class_realizable_runner(points, gc, with_graphs, 1.0 / std::exp(1.0), 500000);
    CHECK(transcript_to_csv(single) == transcript_to_csv(classed));
    CHECK(single.mistakes == classed.mistakes);
    CHECK(*single.opt_h == *classed.opt_h);
    REQUIRE(!classed.bounds.empty());
    CHECK(classed.bounds[0].pass);
}

TEST_CASE("graph-class runners") {
    auto hc = point_functions_class(2);
    GraphClass gc({star(2), star_doubled(2)});
    RandomSource rng(31);
    auto seq = slc::testing::random_realizable_sequence(hc, gc.member(0), 4, rng);
    AgentSequence s = seq;
    s.graph_pool = gc.members();
    s.round_graph.assign(s.size(), 0);

    SUBCASE("realizable runner resolves the true member from the sequence") {
        auto tr = graph_class_realizable_runner(hc, gc, s, 1.0 / std::exp(1.0), 500000);
        REQUIRE(!tr.bounds.empty());
        CHECK(tr.bounds[0].pass);
    }

    SUBCASE("explicit true member via options") {
        RunOptions opt;
        opt.true_member = 0;
        auto tr = graph_class_realizable_runner(hc, gc, seq, 1.0 / std::exp(1.0), 500000, opt);
        CHECK(tr.rows.size() == seq.size());
    }

    SUBCASE("missing true graph is an input error") {
        CHECK_THROWS_AS(graph_class_realizable_runner(hc, gc, seq, 0.5, 500000), input_error);
    }

    SUBCASE("budget zero reduces to the realizable expert set") {
        auto realizable = graph_class_realizable_runner(hc, gc, s, 0.5, 500000);
        auto budgeted = graph_class_agnostic_runner(hc, gc, s, 0, 0.5, 500000);
        CHECK(realizable.experts->count == budgeted.experts->count);
        // Identical play; only the per-round graph bookkeeping differs
        // (the budgeted runner records the round index, the realizable one
        // plays a fixed graph).
        REQUIRE(realizable.rows.size() == budgeted.rows.size());
        for (std::size_t t = 0; t < realizable.rows.size(); ++t) {
            CHECK(realizable.rows[t].v == budgeted.rows[t].v);
            CHECK(realizable.rows[t].prediction == budgeted.rows[t].prediction);
            CHECK(realizable.rows[t].mistake == budgeted.rows[t].mistake);
            CHECK(realizable.rows[t].classifier_digest == budgeted.rows[t].classifier_digest);
        }
        CHECK(realizable.mistakes == budgeted.mistakes);
        REQUIRE(budgeted.opt_g.has_value());
        CHECK(*budgeted.opt_g == 0);
    }

    SUBCASE("per-round graphs outside the union are rejected") {
        AgentSequence bad = s;
        bad.graph_pool = {complete(3)};
        bad.round_graph.assign(bad.size(), 0);
        CHECK_THROWS_AS(graph_class_agnostic_runner(hc, gc, bad, 1, 0.5, 500000), input_error);
    }

    SUBCASE("corrupted rounds stay within budget bounds") {
        RandomSource cr(7);
        auto corrupted = corrupt_graphs(seq, gc.member(0), {&gc.member(1), 1}, 1, cr);
        auto tr = graph_class_agnostic_runner(hc, gc, corrupted, 1, 1.0 / std::exp(1.0), 500000);
        REQUIRE(tr.opt_g.has_value());
        CHECK(*tr.opt_g <= 1);
        REQUIRE(!tr.bounds.empty());
        CHECK(tr.bounds[0].pass);
    }
}

TEST_CASE("doubling runner") {
    auto hc = point_functions_class(2);
    GraphClass gc({star(2), star_doubled(2)});
    RandomSource rng(37);

    SUBCASE("single round, single epoch") {
        AgentSequence s;
        s.agents = {{1, Label::positive}};
        s.graph_pool = gc.members();
        s.round_graph = {0};
        auto tr = doubling_runner(hc, gc, s, 1.0 / std::exp(1.0), 500000);
        CHECK(tr.epochs.size() == 1);
        CHECK(tr.mistakes <= 1);
        for (const auto& b : tr.bounds) CHECK(b.pass);
    }

    SUBCASE("clean instance finishes in the first epoch") {
        auto seq = slc::testing::random_realizable_sequence(hc, gc.member(0), 6, rng);
        AgentSequence s = seq;
        s.graph_pool = gc.members();
        s.round_graph.assign(s.size(), 0);
        auto tr = doubling_runner(hc, gc, s, 1.0 / std::exp(1.0), 500000);
        CHECK(tr.epochs.size() == 1);
        CHECK(tr.rows.size() == s.size());
        // Epoch exit discipline: mistakes never exceed threshold + 1.
        for (const auto& e : tr.epochs) CHECK(e.mistakes <= e.threshold + 1);
        for (const auto& b : tr.bounds) CHECK(b.pass);
    }
}

TEST_CASE("expert cap is a resource error naming the count") {
    auto hc = point_functions_class(3);
    auto g = star(3);
    RandomSource rng(41);
    auto seq = slc::testing::random_realizable_sequence(hc, g, 8, rng);
    CHECK_THROWS_AS(agnostic_runner(hc, g, seq, 0.5, 3), resource_error);
}

TEST_CASE("run_game_per_round uses each round's graph") {
    // Under the star, an agent at a leaf cannot move; under the doubled
    // star it can reach the center. A fixed all-positive-at-center learner
    // makes the difference observable.
    AgentSequence s;
    s.agents = {{1, Label::negative}, {1, Label::negative}};
    s.graph_pool = {star(2), star_doubled(2)};
    s.round_graph = {0, 1};
    Labeling center_only = Labeling::constant(3, Label::negative);
    center_only.set(0, Label::positive);
    FixedLearner fixed(center_only);
    auto tr = run_game_per_round(fixed, s, TieBreakPolicy::canonical_stay());
    REQUIRE(tr.rows.size() == 2);
    CHECK(tr.rows[0].v == 1);  // stuck at the leaf
    CHECK(tr.rows[0].graph_index == 0);
    CHECK(tr.rows[1].v == 0);  // manipulates into the center
    CHECK(tr.rows[1].graph_index == 1);
    CHECK(tr.mistakes == 1);

    AgentSequence no_graphs;
    no_graphs.agents = {{0, Label::positive}};
    CHECK_THROWS_AS(run_game_per_round(fixed, no_graphs, TieBreakPolicy::canonical_stay()),
                    input_error);
}

TEST_CASE("opt_g ties resolve to the lowest index") {
    GraphClass gc({star(2), star(2), star_doubled(2)});
    AgentSequence s;
    s.agents = {{0, Label::positive}};
    s.graph_pool = gc.members();
    s.round_graph = {0};
    auto [opt, idx] = compute_opt_g(s, gc);
    CHECK(opt == 0);
    CHECK(idx == 0);
}
