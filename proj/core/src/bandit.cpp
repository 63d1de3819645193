#include "mils/bandit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mils {

OperatorStats::OperatorStats(int num_arms, BanditParams params)
    : params_(params),
      weights_(static_cast<std::size_t>(num_arms), num_arms > 0 ? 1.0 / num_arms : 0.0),
      scores_(static_cast<std::size_t>(num_arms), 0.0),
      uses_(static_cast<std::size_t>(num_arms), 0) {
    if (num_arms < 1) throw std::invalid_argument("bandit needs at least one arm");
    if (params_.epsilon < 0.0 || params_.epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (params_.lambda < 0.0 || params_.lambda > 1.0) throw std::invalid_argument("lambda must lie in [0, 1]");
}

int OperatorStats::select(Rng &rng) const {
    const double r = rng.uniform();
    const bool greedy = params_.invert_epsilon ? r >= params_.epsilon : r < params_.epsilon;
    if (greedy) {
        int best = 0;
        for (int i = 1; i < size(); ++i) {
            if (weights_[static_cast<std::size_t>(i)] > weights_[static_cast<std::size_t>(best)]) best = i;
        }
        return best;
    }
    return static_cast<int>(rng.below(weights_.size()));
}

void OperatorStats::record(int arm, Outcome outcome) {
    const auto i = static_cast<std::size_t>(arm);
    ++uses_[i];
    switch (outcome) {
        case Outcome::NewGlobalBest: scores_[i] += params_.rewards[0]; break;
        case Outcome::ImprovedLocal: scores_[i] += params_.rewards[1]; break;
        case Outcome::Accepted: scores_[i] += params_.rewards[2]; break;
        case Outcome::Rejected: break;
    }
}

void OperatorStats::end_segment() {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (uses_[i] == 0) continue;
        const double average = scores_[i] / static_cast<double>(uses_[i]);
        weights_[i] = (1.0 - params_.lambda) * weights_[i] + params_.lambda * average;
    }
    const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (sum > 0.0) {
        for (double &w : weights_) w /= sum;
    } else {
        std::fill(weights_.begin(), weights_.end(), 1.0 / static_cast<double>(weights_.size()));
    }
    std::fill(scores_.begin(), scores_.end(), 0.0);
    std::fill(uses_.begin(), uses_.end(), 0);
}

}  // namespace mils
