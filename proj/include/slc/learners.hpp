// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"

namespace slc {

/// Online learner contract. commit() before the t-th observe() must depend
/// only on observations 1..t-1; deterministic learners commit identically
/// on identical histories. Instances are single-owner state machines.
class Learner {
public:
    virtual ~Learner() = default;
    virtual const Labeling& commit() = 0;
    virtual void observe(const Observation& obs, bool made_mistake) = 0;
    virtual void reset() = 0;
    virtual std::string name() const = 0;
};

/// Seeded pseudo-random stream; identical seeds give identical draws.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64();
    /// Uniform index in [0, k).
    std::size_t next_index(std::size_t k);
    /// Uniform double in [0, 1) with 53 bits.
    double next_double();

private:
    std::uint64_t state_;
};

/// The SSOA commit rule for a given version space: x is positive exactly
/// when filtering by the false-positive observation (x,-1) strictly drops
/// the strategic Littlestone dimension.
Labeling ssoa_commit(const SldimSolver& solver, const MemberMask& version);

/// Version-space core of SSOA, shared by the learner and the experts.
/// Never throws on empty version spaces: the commit rule degrades to the
/// all-negative classifier and further filters keep the space empty.
class SsoaCore {
public:
    explicit SsoaCore(std::shared_ptr<const SldimSolver> solver);

    const Labeling& commit();
    void update(const Observation& obs);
    void reset();

    const MemberMask& version() const { return version_; }
    int current_dimension() const { return solver_->dimension(version_); }
    const SldimSolver& solver() const { return *solver_; }

private:
    void refresh();

    std::shared_ptr<const SldimSolver> solver_;
    MemberMask version_;
    std::shared_ptr<const Labeling> committed_;  // shared via the session cache
    bool dirty_ = true;
};

/// Strategic Standard Optimal Algorithm: labels x positive exactly when the
/// false-positive filter at x strictly shrinks the strategic Littlestone
/// dimension of the version space; filters only on mistakes.
class SsoaLearner : public Learner {
public:
    explicit SsoaLearner(std::shared_ptr<const SldimSolver> solver) : core_(std::move(solver)) {}

    const Labeling& commit() override { return core_.commit(); }
    void observe(const Observation& obs, bool made_mistake) override;
    void reset() override { core_.reset(); }
    std::string name() const override { return "ssoa"; }

    const MemberMask& version() const { return core_.version(); }
    int current_dimension() const { return core_.current_dimension(); }
    const SldimSolver& solver() const { return core_.solver(); }

private:
    SsoaCore core_;
};

/// The learner and its dimension session; the class and graph are borrowed
/// and must outlive the learner.
std::unique_ptr<SsoaLearner> ssoa_new(const HypothesisClass& hc, const ManipulationGraph& g);

/// Classical SOA through the same interface: commits the pointwise argmax
/// prediction labeling (ties toward +1) and filters the version space on
/// every observation, as in the non-strategic setting.
std::unique_ptr<Learner> soa_new(const HypothesisClass& hc);

std::unique_ptr<Learner> constant_learner(NodeId n, Label label);

/// Starts all-positive; flips an observed false positive node to negative.
std::unique_ptr<Learner> flip_positive_to_negative(NodeId n);

/// Predicts all nodes negative until the first mistake, then all positive.
std::unique_ptr<Learner> all_negative_then_all_positive(NodeId n);

/// Appendix-style randomized learner for the star instance with `delta`
/// leaves: keeps the point hypotheses consistent with play and commits one
/// drawn uniformly at random each round.
std::unique_ptr<Learner> randomized_star_learner(NodeId delta, RandomSource rng);

}  // namespace slc
