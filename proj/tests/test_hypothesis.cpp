// Copyright 2026 slcsim authors
// License: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "slc/hypothesis.hpp"
#include "support/oracles.hpp"

using namespace slc;

namespace {

Labeling indicator(NodeId n, NodeId x) {
    Labeling h = Labeling::constant(n, Label::negative);
    h.set(x, Label::positive);
    return h;
}

}  // namespace

TEST_CASE("effective labels") {
    auto s3 = star(3);
    CHECK(effective_label(indicator(4, 1), s3, 0) == Label::positive);

    auto iso = isolated(4);
    RandomSource rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        auto hc = slc::testing::random_class(4, 4, rng);
        for (const auto& h : hc.members()) {
            for (NodeId x = 0; x < 4; ++x) CHECK(effective_label(h, iso, x) == h[x]);
        }
    }

    Labeling allneg = Labeling::constant(4, Label::negative);
    for (NodeId x = 0; x < 4; ++x) {
        CHECK(effective_label(allneg, complete(4), x) == Label::negative);
    }
}

TEST_CASE("best response and tie-break policies") {
    auto s2 = star(2);
    Labeling allneg = Labeling::constant(3, Label::negative);
    CHECK(best_response(allneg, s2, 0, TieBreakPolicy::canonical_stay()) == 0);

    CHECK(best_response(indicator(3, 2), s2, 0, TieBreakPolicy::canonical_stay()) == 2);

    Labeling pos01 = Labeling::constant(3, Label::negative);
    pos01.set(0, Label::positive);
    pos01.set(1, Label::positive);
    CHECK(best_response(pos01, s2, 0, TieBreakPolicy::lowest_id()) == 0);
    // CanonicalStay stays when the agent's own node is positive.
    CHECK(best_response(pos01, s2, 0, TieBreakPolicy::canonical_stay()) == 0);

    auto pick_last = TieBreakPolicy::callback(
        [](NodeId, std::span<const NodeId> br) { return br.back(); });
    CHECK(best_response(pos01, s2, 0, pick_last) == 1);
    auto pick_bad = TieBreakPolicy::callback(
        [](NodeId, std::span<const NodeId>) { return NodeId{2}; });
    CHECK_THROWS_AS(best_response(pos01, s2, 0, pick_bad), protocol_error);
}

TEST_CASE("tie-break invariance of the realized label up to n=6") {
    // effective_label(h,g,x) == h(best_response(h,g,x,policy)) for every
    // built-in policy, over all h for each generated graph.
    auto policies = {TieBreakPolicy::canonical_stay(), TieBreakPolicy::lowest_id(),
                     TieBreakPolicy::callback(
                         [](NodeId, std::span<const NodeId> br) { return br.back(); })};
    for (NodeId n = 1; n <= 6; ++n) {
        std::vector<ManipulationGraph> graphs{isolated(n), complete(n),
                                              random_gnp(n, 0.5, 7 * n)};
        if (n >= 2) graphs.push_back(star(n - 1));
        auto all = all_functions_class(n);
        for (const auto& g : graphs) {
            for (const auto& h : all.members()) {
                for (NodeId x = 0; x < n; ++x) {
                    for (const auto& p : policies) {
                        CHECK(effective_label(h, g, x) == h[best_response(h, g, x, p)]);
                    }
                }
            }
        }
    }
}

TEST_CASE("filter_consistent spec examples") {
    auto s3 = star(3);
    auto points = point_functions_class(3);
    auto full = VersionSpace::full_of(points);

    auto empty = filter_consistent(full, s3, {0, Label::negative});
    CHECK(empty.mask.empty());

    auto keep23 = filter_consistent(full, s3, {1, Label::negative});
    CHECK(keep23.mask.to_indices() == std::vector<std::size_t>{1, 2});

    HypothesisClass allpos(3, {Labeling::constant(3, Label::positive)});
    auto f = VersionSpace::full_of(allpos);
    CHECK(filter_consistent(f, s3, {2, Label::positive}).mask == f.mask);
}

TEST_CASE("filter_consistent agrees with an independent scan and is monotone") {
    RandomSource rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        NodeId n = static_cast<NodeId>(2 + rng.next_index(4));
        auto g = slc::testing::random_digraph(n, 0.5, rng);
        auto hc = slc::testing::random_class(n, 2 + rng.next_index(6), rng);
        auto full = VersionSpace::full_of(hc);
        std::vector<std::size_t> all_idx = full.mask.to_indices();
        for (NodeId v = 0; v < n; ++v) {
            for (Label y : {Label::positive, Label::negative}) {
                auto got = filter_consistent(full, g, {v, y}).mask.to_indices();
                auto want = slc::testing::oracle_filter(hc, g, all_idx, v, y);
                CHECK(got == want);
            }
        }
        // Monotonicity on a random subspace.
        VersionSpace sub{&hc, MemberMask(hc.size())};
        for (std::size_t i : all_idx) {
            if (rng.next_index(2)) sub.mask.set(i);
        }
        for (NodeId v = 0; v < n; ++v) {
            for (Label y : {Label::positive, Label::negative}) {
                auto fs = filter_consistent(sub, g, {v, y}).mask;
                auto ff = filter_consistent(full, g, {v, y}).mask;
                CHECK(fs.is_subset_of(ff));
                CHECK(fs.is_subset_of(sub.mask));
            }
        }
    }
}

TEST_CASE("built-in classes") {
    auto p2 = point_functions_class(2);
    CHECK(p2.size() == 2);
    CHECK(p2.node_count() == 3);
    CHECK(p2.member(0) == indicator(3, 1));
    CHECK(p2.member(1) == indicator(3, 2));

    CHECK(all_functions_class(1).size() == 2);
    CHECK(all_functions_class(1).member(0) == Labeling::constant(1, Label::negative));
    CHECK(all_functions_class(1).member(1) == Labeling::constant(1, Label::positive));
    CHECK(all_functions_class(2).size() == 4);
    CHECK_THROWS_AS(all_functions_class(21), resource_error);

    CHECK_THROWS_AS(HypothesisClass(2, {indicator(2, 0), indicator(2, 0)}), input_error);
    CHECK_THROWS_AS(HypothesisClass(2, {indicator(3, 0)}), input_error);
}

TEST_CASE("effective reduction") {
    auto all3 = all_functions_class(3);
    auto reduced = effective_reduction(all3, complete(3));
    REQUIRE(reduced.size() == 2);
    CHECK(reduced.member(0) == Labeling::constant(3, Label::negative));
    // The other representative induces the all-positive effective classifier.
    CHECK(effective_labeling(reduced.member(1), complete(3)) ==
          Labeling::constant(3, Label::positive));

    auto same = effective_reduction(all3, isolated(3));
    CHECK(same.members() == all3.members());

    HypothesisClass singleton(3, {indicator(3, 1)});
    CHECK(effective_reduction(singleton, complete(3)).members() == singleton.members());
}

TEST_CASE("labeling digest is stable content hash") {
    Labeling a = indicator(4, 2);
    Labeling b = indicator(4, 2);
    CHECK(a.digest_hex() == b.digest_hex());
    b.set(0, Label::positive);
    CHECK(a.digest_hex() != b.digest_hex());
    CHECK(a.digest_hex().size() == 16);
}
