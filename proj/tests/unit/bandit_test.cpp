#include "mils/bandit.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace mils {
namespace {

double sum(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(OperatorStats, StartsUniform) {
    const OperatorStats stats(5);
    EXPECT_NEAR(sum(stats.weights()), 1.0, 1e-15);
    for (double w : stats.weights()) EXPECT_DOUBLE_EQ(w, 0.2);
    EXPECT_THROW(OperatorStats(0), std::invalid_argument);
    EXPECT_THROW(OperatorStats(3, {1.5}), std::invalid_argument);
}

TEST(OperatorStats, EpsilonOneIsGreedy) {
    OperatorStats stats(3, {1.0});
    stats.set_weights({0.2, 0.5, 0.3});
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(stats.select(rng), 1);
}

TEST(OperatorStats, GreedyTieTakesLowestIndex) {
    OperatorStats stats(3, {1.0});
    stats.set_weights({0.2, 0.4, 0.4});
    Rng rng(1);
    EXPECT_EQ(stats.select(rng), 1);
}

TEST(OperatorStats, EpsilonZeroIsUniformWhateverTheWeights) {
    OperatorStats stats(5, {0.0});
    stats.set_weights({0.96, 0.01, 0.01, 0.01, 0.01});
    Rng rng(2);
    std::vector<int> counts(5, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(stats.select(rng))];
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.2, 0.01);
}

TEST(OperatorStats, RecordAddsRewards) {
    OperatorStats stats(2);
    stats.record(0, Outcome::NewGlobalBest);
    EXPECT_EQ(stats.scores()[0], 3.0);
    stats.record(0, Outcome::ImprovedLocal);
    EXPECT_EQ(stats.scores()[0], 8.0);
    stats.record(1, Outcome::Rejected);
    EXPECT_EQ(stats.scores()[1], 0.0);
    EXPECT_EQ(stats.uses()[1], 1);
    stats.record(1, Outcome::Accepted);
    stats.record(1, Outcome::Accepted);
    EXPECT_EQ(stats.scores()[1], 20.0);
    EXPECT_EQ(stats.uses()[0], 2);
    EXPECT_EQ(stats.uses()[1], 3);
}

TEST(OperatorStats, LambdaZeroKeepsWeights) {
    OperatorStats stats(3, {0.01, 0.0});
    stats.set_weights({0.5, 0.3, 0.2});
    stats.set_segment(0, 30.0, 3);
    stats.set_segment(2, 10.0, 1);
    stats.end_segment();
    EXPECT_NEAR(stats.weights()[0], 0.5, 1e-15);
    EXPECT_NEAR(stats.weights()[1], 0.3, 1e-15);
    EXPECT_NEAR(stats.weights()[2], 0.2, 1e-15);
    EXPECT_EQ(stats.scores()[0], 0.0);
    EXPECT_EQ(stats.uses()[0], 0);
}

TEST(OperatorStats, LambdaOneWinnerTakesAll) {
    OperatorStats stats(3, {0.01, 1.0});
    stats.set_segment(0, 10.0, 1);
    stats.set_segment(1, 0.0, 4);
    stats.set_segment(2, 0.0, 2);
    stats.end_segment();
    EXPECT_EQ(stats.weights(), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(OperatorStats, WorkedExampleHalfLambda) {
    OperatorStats stats(2, {0.01, 0.5});
    stats.set_weights({0.5, 0.5});
    stats.set_segment(0, 10.0, 1);
    stats.set_segment(1, 0.0, 1);
    stats.end_segment();
    // Before normalization (5.25, 0.25).
    EXPECT_EQ(stats.weights()[0], 21.0 / 22.0);
    EXPECT_EQ(stats.weights()[1], 1.0 / 22.0);
}

TEST(OperatorStats, UnusedArmKeepsWeightBeforeNormalization) {
    OperatorStats stats(2, {0.01, 0.5});
    stats.set_weights({0.5, 0.5});
    stats.set_segment(0, 1.0, 2);  // average 0.5, weight stays 0.5
    stats.end_segment();
    EXPECT_DOUBLE_EQ(stats.weights()[0], 0.5);
    EXPECT_DOUBLE_EQ(stats.weights()[1], 0.5);
}

TEST(OperatorStats, AllZeroFallsBackToUniform) {
    OperatorStats stats(4, {0.01, 1.0});
    for (int i = 0; i < 4; ++i) stats.set_segment(i, 0.0, 3);
    stats.end_segment();
    for (double w : stats.weights()) EXPECT_DOUBLE_EQ(w, 0.25);
}

TEST(OperatorStats, WeightsStayNormalizedUnderFuzz) {
    Rng rng(7);
    OperatorStats stats(5);
    const Outcome outcomes[] = {Outcome::NewGlobalBest, Outcome::ImprovedLocal, Outcome::Accepted,
                                Outcome::Rejected};
    for (int it = 1; it <= 10000; ++it) {
        stats.record(stats.select(rng), outcomes[rng.below(4)]);
        if (it % 100 == 0) {
            stats.end_segment();
            ASSERT_NEAR(sum(stats.weights()), 1.0, 1e-12);
            for (double w : stats.weights()) ASSERT_GE(w, 0.0);
        }
    }
}

TEST(OperatorStats, InvertedEpsilonFavoursRewardedArm) {
    BanditParams params;
    params.invert_epsilon = true;
    OperatorStats stats(5, params);
    Rng rng(11);
    std::vector<long> picks(5, 0);
    for (int segment = 0; segment < 50; ++segment) {
        for (int i = 0; i < 100; ++i) {
            const int arm = stats.select(rng);
            ++picks[static_cast<std::size_t>(arm)];
            stats.record(arm, arm == 3 ? Outcome::Accepted : Outcome::Rejected);
        }
        stats.end_segment();
    }
    for (int arm = 0; arm < 5; ++arm) {
        if (arm != 3) {
            EXPECT_GT(picks[3], picks[static_cast<std::size_t>(arm)]);
        }
    }
}

}  // namespace
}  // namespace mils
