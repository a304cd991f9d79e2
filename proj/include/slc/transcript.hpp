// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"

namespace slc {

struct TranscriptRow {
    std::size_t t = 0;  // 1-based round
    NodeId x = 0;       // original feature (backfilled by adversaries)
    NodeId v = 0;       // observed post-manipulation feature
    Label y = Label::positive;
    Label prediction = Label::positive;
    bool mistake = false;
    int graph_index = -1;  // per-round graph index, -1 for fixed-graph runs
    std::string classifier_digest;
};

/// One printed inequality: pass iff measured <= bound.
struct BoundCheck {
    std::string name;
    double measured = 0;
    double bound = 0;
    bool pass = false;
};

struct EpochInfo {
    int k = 0;                  // epoch index, 1-based
    std::size_t budget = 0;     // N_k
    std::size_t first_round = 0;
    std::size_t last_round = 0;
    std::size_t mistakes = 0;
    std::size_t threshold = 0;  // C * 2^k
};

struct ExpertSetSummary {
    unsigned long long count = 0;
    int max_m = 0;
    std::size_t cap = 0;
};

/// Per-round game record plus aggregates.
struct Transcript {
    std::vector<TranscriptRow> rows;
    std::size_t mistakes = 0;
    std::optional<std::size_t> opt_h;
    std::optional<std::size_t> opt_h_index;
    std::optional<std::size_t> opt_g;
    std::optional<std::size_t> opt_g_index;
    std::optional<long long> regret;  // mistakes - opt_h
    std::vector<BoundCheck> bounds;
    std::vector<EpochInfo> epochs;
    // (W before, W after) on each aggregator mistake, for decay checks.
    std::vector<std::pair<double, double>> weight_decay;
    std::optional<ExpertSetSummary> experts;

    void set_opt_h(std::size_t value, std::size_t index) {
        opt_h = value;
        opt_h_index = index;
        regret = static_cast<long long>(mistakes) - static_cast<long long>(value);
    }
};

}  // namespace slc
