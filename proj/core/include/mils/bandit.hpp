#pragma once

#include "mils/acceptance.hpp"
#include "mils/rng.hpp"

#include <array>
#include <vector>

namespace mils {

struct BanditParams {
    double epsilon = 0.01;
    double lambda = 0.5;
    /// Rewards for a new global best, an improved local solution and a plain acceptance.
    std::array<double, 3> rewards{3.0, 5.0, 10.0};
    /// Take the argmax with probability 1 - epsilon instead of epsilon.
    bool invert_epsilon = false;
};

/// Epsilon-greedy selector over a fixed set of operators with segmented,
/// reaction-factor smoothed weight updates.
class OperatorStats {
public:
    OperatorStats(int num_arms, BanditParams params = {});

    int size() const { return static_cast<int>(weights_.size()); }
    const std::vector<double> &weights() const { return weights_; }
    const std::vector<double> &scores() const { return scores_; }
    const std::vector<long> &uses() const { return uses_; }
    const BanditParams &params() const { return params_; }

    int select(Rng &rng) const;
    void record(int arm, Outcome outcome);
    /// Folds the segment's average scores into the weights, renormalizes
    /// them to sum to one and clears scores and counters.
    void end_segment();

    /// Directly sets the state; used to reproduce worked examples.
    void set_weights(std::vector<double> weights) { weights_ = std::move(weights); }
    void set_segment(int arm, double score, long uses) {
        scores_[static_cast<std::size_t>(arm)] = score;
        uses_[static_cast<std::size_t>(arm)] = uses;
    }

private:
    BanditParams params_;
    std::vector<double> weights_;
    std::vector<double> scores_;
    std::vector<long> uses_;
};

}  // namespace mils
