#pragma once

#include "mils/acceptance.hpp"
#include "mils/bandit.hpp"
#include "mils/instance.hpp"
#include "mils/local_search.hpp"
#include "mils/perturbation.hpp"
#include "mils/single_tour.hpp"
#include "mils/solution.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mils {

struct StopRule {
    /// Total iteration budget across restarts; negative means unlimited.
    long iterations = -1;
    /// Wall-clock budget; negative means unlimited.
    double milliseconds = -1.0;
    /// Stop as soon as the best makespan is at or below this value.
    std::optional<double> target;
};

struct SearchConfig {
    long i_max = 40000;  // iterations per round before a restart
    double p_accept = 0.7;
    double w = 0.35;
    double tf = 0.0001;
    int alpha = 10;
    long i_threshold = 1000;  // round iterations before elite tour improvement kicks in
    int segment_length = 100;
    BanditParams bandit;
    PerturbationParams perturbation;
    LocalSearchOptions local_search;
    TourImprover tour_improver;
    StopRule stop;
    std::uint64_t seed = 1;
    bool record_trace = false;
    /// Feasibility check period; 0 picks 1 in debug builds and 1000 otherwise.
    long validate_every = 0;
};

struct TraceRow {
    long iteration = 0;
    double f_current = 0.0;
    double f_local = 0.0;
    double f_best = 0.0;
    RemovalOp removal = RemovalOp::Shaw;
    InsertionOp insertion = InsertionOp::Greedy;
    Outcome outcome = Outcome::Rejected;
    double temperature = 0.0;
    double ms = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<long> restarts;  // iteration numbers at which a fresh round began
};

void write_trace_csv(std::ostream &out, const RunTrace &trace);

struct RunResult {
    Solution best;
    RunTrace trace;
    long iterations = 0;
    long restarts = 0;
    double elapsed_ms = 0.0;
    double best_found_ms = 0.0;
    std::vector<double> removal_weights;
    std::vector<double> insertion_weights;
};

/// One seeded run of the iterated local search. Throws std::invalid_argument
/// when m is not in [1, n].
RunResult run_mils(const Instance &instance, int m, const SearchConfig &config);

struct BatchSummary {
    double best = 0.0;
    double average = 0.0;
    std::vector<double> values;
    std::vector<long> iterations;
    std::vector<std::uint64_t> seeds;
    Solution best_solution;
    double wall_ms = 0.0;
};

/// Worker count: hardware concurrency capped by the MILS_THREADS variable.
int worker_threads();

/// `runs` independent runs with seeds config.seed + i, spread over a pool of
/// worker_threads() threads. Rethrows the first run failure.
BatchSummary run_batch(const Instance &instance, int m, const SearchConfig &config, int runs);

}  // namespace mils
