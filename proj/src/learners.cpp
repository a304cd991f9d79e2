// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/learners.hpp"

#include <limits>
#include <unordered_map>
#include <vector>

namespace slc {

std::uint64_t RandomSource::next_u64() {
    // splitmix64; small, portable, stable across platforms.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::size_t RandomSource::next_index(std::size_t k) {
    if (k == 0) throw input_error("next_index: k must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % k;
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r >= limit);
    return static_cast<std::size_t>(r % k);
}

double RandomSource::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Labeling ssoa_commit(const SldimSolver& solver, const MemberMask& version) {
    return *solver.ssoa_commit_for(version);
}

SsoaCore::SsoaCore(std::shared_ptr<const SldimSolver> solver)
    : solver_(std::move(solver)), version_(solver_->full_mask()) {}

void SsoaCore::refresh() {
    committed_ = solver_->ssoa_commit_for(version_);
    dirty_ = false;
}

const Labeling& SsoaCore::commit() {
    if (dirty_) refresh();
    return *committed_;
}

void SsoaCore::update(const Observation& obs) {
    version_ = solver_->filter(version_, obs);
    dirty_ = true;
}

void SsoaCore::reset() {
    version_ = solver_->full_mask();
    dirty_ = true;
}

void SsoaLearner::observe(const Observation& obs, bool made_mistake) {
    if (!made_mistake) return;
    core_.update(obs);
    if (core_.version().empty()) {
        throw protocol_error("SSOA version space emptied: sequence not realizable");
    }
}

std::unique_ptr<SsoaLearner> ssoa_new(const HypothesisClass& hc, const ManipulationGraph& g) {
    if (hc.empty()) throw input_error("ssoa_new: hypothesis class is empty");
    return std::make_unique<SsoaLearner>(std::make_shared<SldimSolver>(hc, g));
}

namespace {

// Classical pointwise version-space session.
class SoaLearner : public Learner {
public:
    explicit SoaLearner(const HypothesisClass& hc)
        : hc_(&hc), pos_(hc.node_count(), MemberMask(hc.size())),
          version_(MemberMask::full(hc.size())) {
        for (NodeId x = 0; x < hc.node_count(); ++x) {
            for (std::size_t i = 0; i < hc.size(); ++i) {
                if (hc.member(i).is_positive(x)) pos_[x].set(i);
            }
        }
    }

    const Labeling& commit() override {
        if (!dirty_) return committed_;
        Labeling h = Labeling::constant(hc_->node_count(), Label::negative);
        for (NodeId x = 0; x < hc_->node_count(); ++x) {
            int dpos = dim(version_ & pos_[x]);
            int dneg = dim(version_.minus(pos_[x]));
            h.set(x, dpos >= dneg ? Label::positive : Label::negative);
        }
        committed_ = std::move(h);
        dirty_ = false;
        return committed_;
    }

    void observe(const Observation& obs, bool /*made_mistake*/) override {
        version_ = obs.y == Label::positive ? version_ & pos_[obs.v]
                                            : version_.minus(pos_[obs.v]);
        dirty_ = true;
        if (version_.empty()) {
            throw protocol_error("SOA version space emptied: sequence not realizable");
        }
    }

    void reset() override {
        version_ = MemberMask::full(hc_->size());
        memo_.clear();
        dirty_ = true;
    }

    std::string name() const override { return "soa"; }

private:
    int dim(const MemberMask& f) {
        if (f.empty()) return -1;
        auto it = memo_.find(f);
        if (it != memo_.end()) return it->second;
        int best = 0;
        for (NodeId x = 0; x < hc_->node_count(); ++x) {
            MemberMask a = f & pos_[x];
            MemberMask b = f.minus(pos_[x]);
            if (a == f || b == f) continue;
            best = std::max(best, std::min(1 + dim(a), 1 + dim(b)));
        }
        memo_.emplace(f, best);
        return best;
    }

    const HypothesisClass* hc_;
    std::vector<MemberMask> pos_;
    MemberMask version_;
    std::unordered_map<MemberMask, int, MemberMaskHash> memo_;
    Labeling committed_;
    bool dirty_ = true;
};

class ConstantLearner : public Learner {
public:
    ConstantLearner(NodeId n, Label label)
        : committed_(Labeling::constant(n, label)), label_(label) {}
    const Labeling& commit() override { return committed_; }
    void observe(const Observation&, bool) override {}
    void reset() override {}
    std::string name() const override {
        return label_ == Label::positive ? "const+" : "const-";
    }

private:
    Labeling committed_;
    Label label_;
};

class FlipLearner : public Learner {
public:
    explicit FlipLearner(NodeId n) : n_(n), committed_(Labeling::constant(n, Label::positive)) {}
    const Labeling& commit() override { return committed_; }
    void observe(const Observation& obs, bool made_mistake) override {
        if (made_mistake && obs.y == Label::negative) committed_.set(obs.v, Label::negative);
    }
    void reset() override { committed_ = Labeling::constant(n_, Label::positive); }
    std::string name() const override { return "flip"; }

private:
    NodeId n_;
    Labeling committed_;
};

class NegThenPosLearner : public Learner {
public:
    explicit NegThenPosLearner(NodeId n)
        : n_(n), committed_(Labeling::constant(n, Label::negative)) {}
    const Labeling& commit() override { return committed_; }
    void observe(const Observation&, bool made_mistake) override {
        if (made_mistake && !flipped_) {
            committed_ = Labeling::constant(n_, Label::positive);
            flipped_ = true;
        }
    }
    void reset() override {
        committed_ = Labeling::constant(n_, Label::negative);
        flipped_ = false;
    }
    std::string name() const override { return "negthenpos"; }

private:
    NodeId n_;
    Labeling committed_;
    bool flipped_ = false;
};

class RandomizedStarLearner : public Learner {
public:
    RandomizedStarLearner(NodeId delta, RandomSource rng)
        : delta_(delta), rng_(rng), committed_(Labeling::constant(delta + 1, Label::negative)) {
        if (delta < 1) throw input_error("randomized_star_learner: delta must be >= 1");
        reset();
    }

    const Labeling& commit() override {
        NodeId leaf = candidates_[rng_.next_index(candidates_.size())];
        committed_ = Labeling::constant(delta_ + 1, Label::negative);
        committed_.set(leaf, Label::positive);
        return committed_;
    }

    void observe(const Observation& obs, bool /*made_mistake*/) override {
        if (obs.v == 0) {
            // Center observations carry no information about the target leaf.
            if (obs.y == Label::negative) {
                throw protocol_error("randomized star learner: center observed negative; "
                                     "sequence not realizable");
            }
            return;
        }
        const NodeId leaf = obs.v;
        if (obs.y == Label::positive) {
            if (!erase_all_but(leaf)) {
                throw protocol_error("randomized star learner: version space emptied");
            }
        } else {
            erase(leaf);
            if (candidates_.empty()) {
                throw protocol_error("randomized star learner: version space emptied");
            }
        }
    }

    void reset() override {
        candidates_.clear();
        for (NodeId i = 1; i <= delta_; ++i) candidates_.push_back(i);
    }

    std::string name() const override { return "randstar"; }

    const std::vector<NodeId>& candidates() const { return candidates_; }

private:
    void erase(NodeId leaf) {
        std::erase(candidates_, leaf);
    }
    bool erase_all_but(NodeId leaf) {
        for (NodeId c : candidates_) {
            if (c == leaf) {
                candidates_ = {leaf};
                return true;
            }
        }
        return false;
    }

    NodeId delta_;
    RandomSource rng_;
    std::vector<NodeId> candidates_;
    Labeling committed_;
};

}  // namespace

std::unique_ptr<Learner> soa_new(const HypothesisClass& hc) {
    if (hc.empty()) throw input_error("soa_new: hypothesis class is empty");
    return std::make_unique<SoaLearner>(hc);
}

std::unique_ptr<Learner> constant_learner(NodeId n, Label label) {
    return std::make_unique<ConstantLearner>(n, label);
}

std::unique_ptr<Learner> flip_positive_to_negative(NodeId n) {
    return std::make_unique<FlipLearner>(n);
}

std::unique_ptr<Learner> all_negative_then_all_positive(NodeId n) {
    return std::make_unique<NegThenPosLearner>(n);
}

std::unique_ptr<Learner> randomized_star_learner(NodeId delta, RandomSource rng) {
    return std::make_unique<RandomizedStarLearner>(delta, rng);
}

}  // namespace slc
