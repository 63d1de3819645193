#include "mils/driver.hpp"

#include "mils/exact.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

namespace mils {
namespace {

SearchConfig iterations(long n, std::uint64_t seed = 1) {
    SearchConfig config;
    config.stop.iterations = n;
    config.seed = seed;
    return config;
}

TEST(RunMils, ZeroIterationsReturnsInitialSolution) {
    const Instance inst = testing::random_instance(20, 1);
    SearchConfig config = iterations(0, 5);
    config.record_trace = true;
    const RunResult result = run_mils(inst, 3, config);
    EXPECT_EQ(result.iterations, 0);
    EXPECT_TRUE(result.trace.rows.empty());
    const NeighborList nb(inst, config.alpha);
    Rng rng(5);
    EXPECT_EQ(result.best, greedy_random_init(inst, 3, nb, rng));
}

TEST(RunMils, RejectsInfeasibleM) {
    const Instance inst = testing::random_instance(5, 1);
    EXPECT_THROW(run_mils(inst, 6, iterations(10)), std::invalid_argument);
    EXPECT_THROW(run_mils(inst, 0, iterations(10)), std::invalid_argument);
}

TEST(RunMils, DeterministicTraceForSeed) {
    const Instance inst = testing::random_instance(30, 2);
    SearchConfig config = iterations(300, 9);
    config.record_trace = true;
    const RunResult a = run_mils(inst, 3, config);
    const RunResult b = run_mils(inst, 3, config);
    EXPECT_EQ(a.best, b.best);
    ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        const TraceRow &x = a.trace.rows[i];
        const TraceRow &y = b.trace.rows[i];
        ASSERT_EQ(x.f_current, y.f_current);
        ASSERT_EQ(x.f_local, y.f_local);
        ASSERT_EQ(x.f_best, y.f_best);
        ASSERT_EQ(x.removal, y.removal);
        ASSERT_EQ(x.insertion, y.insertion);
        ASSERT_EQ(x.outcome, y.outcome);
        ASSERT_EQ(x.temperature, y.temperature);
    }
    EXPECT_EQ(a.removal_weights, b.removal_weights);
}

TEST(RunMils, BestIsMonotoneAcrossRestarts) {
    const Instance inst = testing::random_instance(25, 3);
    SearchConfig config = iterations(700, 4);
    config.i_max = 100;
    config.i_threshold = 20;
    config.record_trace = true;
    config.validate_every = 1;
    const RunResult result = run_mils(inst, 3, config);
    ASSERT_EQ(result.trace.rows.size(), 700u);
    for (std::size_t i = 1; i < result.trace.rows.size(); ++i)
        ASSERT_LE(result.trace.rows[i].f_best, result.trace.rows[i - 1].f_best);
    for (const auto &row : result.trace.rows) ASSERT_LE(row.f_best, row.f_local + 1e-12);
    EXPECT_DOUBLE_EQ(result.trace.rows.back().f_best, result.best.makespan());
    EXPECT_TRUE(validate(inst, 3, result.best).empty());
}

TEST(RunMils, RestartFiresWhenRoundCounterExceedsLimit) {
    const Instance inst = testing::random_instance(15, 5);
    SearchConfig config = iterations(500, 2);
    config.i_max = 100;
    config.record_trace = true;
    const RunResult result = run_mils(inst, 2, config);
    // Rounds run Iter = 0..i_max, i.e. i_max + 1 iterations each.
    EXPECT_EQ(result.trace.restarts, (std::vector<long>{101, 202, 303, 404}));
    EXPECT_EQ(result.restarts, 4);
    // Temperature starts over after each restart.
    EXPECT_EQ(result.trace.rows[101].temperature, result.trace.rows[0].temperature);
    EXPECT_LT(result.trace.rows[100].temperature, result.trace.rows[0].temperature);
}

TEST(RunMils, FindsOptimumOnEightCities) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = testing::random_instance(8, seed + 10);
        const double optimum = brute_force_opt(inst, 2).makespan;
        SearchConfig config = iterations(100000, seed);
        config.stop.target = optimum;
        const RunResult result = run_mils(inst, 2, config);
        EXPECT_NEAR(result.best.makespan(), optimum, 1e-6) << "seed " << seed;
        EXPECT_GE(result.best.makespan(), optimum - 1e-9);
    }
}

TEST(RunMils, TimeBudgetStops) {
    const Instance inst = testing::random_instance(60, 6);
    SearchConfig config;
    config.stop.milliseconds = 200;
    const RunResult result = run_mils(inst, 4, config);
    EXPECT_GT(result.iterations, 0);
    EXPECT_LT(result.elapsed_ms, 5000);
}

TEST(RunMils, TraceCsvHeader) {
    const Instance inst = testing::random_instance(10, 7);
    SearchConfig config = iterations(3);
    config.record_trace = true;
    std::ostringstream out;
    write_trace_csv(out, run_mils(inst, 2, config).trace);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "iter,f_phi,f_local,f_best,removal_op,insertion_op,outcome,temperature,ms");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3);
}

TEST(RunBatch, SingleRunBestEqualsAverage) {
    const Instance inst = testing::random_instance(20, 8);
    const BatchSummary s = run_batch(inst, 3, iterations(100), 1);
    EXPECT_EQ(s.best, s.average);
    EXPECT_EQ(s.values.size(), 1u);
}

TEST(RunBatch, DeterministicAndSeededPerRun) {
    const Instance inst = testing::random_instance(20, 9);
    const SearchConfig config = iterations(150, 40);
    const BatchSummary a = run_batch(inst, 2, config, 6);
    const BatchSummary b = run_batch(inst, 2, config, 6);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.best_solution, b.best_solution);
    EXPECT_EQ(a.seeds, (std::vector<std::uint64_t>{40, 41, 42, 43, 44, 45}));
    SearchConfig third = config;
    third.seed = 42;
    EXPECT_EQ(run_mils(inst, 2, third).best.makespan(), a.values[2]);
    EXPECT_LE(a.best, a.average + 1e-9);
    EXPECT_THROW(run_batch(inst, 2, config, 0), std::invalid_argument);
}

TEST(WorkerThreads, HonoursCap) {
    ::setenv("MILS_THREADS", "1", 1);
    EXPECT_EQ(worker_threads(), 1);
    ::setenv("MILS_THREADS", "garbage", 1);
    EXPECT_GE(worker_threads(), 1);
    ::unsetenv("MILS_THREADS");
}

TEST(RunBatch, ReachesKnownOptimumOnMtsp51TenSalesmen) {
    const Instance inst = read_tsplib_file(testing::instance_path("mtsp51.tsp"));
    SearchConfig config;
    config.stop.milliseconds = 20000;
    config.stop.target = 112.07;
    const BatchSummary s = run_batch(inst, 10, config, 2);
    EXPECT_NEAR(s.best, 112.07, 0.01);
}

}  // namespace
}  // namespace mils
