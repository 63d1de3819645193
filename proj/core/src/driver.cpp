#include "mils/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace mils {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

long default_validate_period() {
#ifdef NDEBUG
    return 1000;
#else
    return 1;
#endif
}

void check_feasible(const Instance &instance, int m, const Solution &solution, long iteration) {
    const auto violations = validate(instance, m, solution);
    if (!violations.empty())
        throw std::logic_error("infeasible solution at iteration " + std::to_string(iteration) + ": " +
                               violations.front().message);
}

}  // namespace

void write_trace_csv(std::ostream &out, const RunTrace &trace) {
    out << "iter,f_phi,f_local,f_best,removal_op,insertion_op,outcome,temperature,ms\n";
    for (const auto &r : trace.rows) {
        out << r.iteration << ',' << format_double(r.f_current) << ',' << format_double(r.f_local) << ','
            << format_double(r.f_best) << ',' << to_string(r.removal) << ',' << to_string(r.insertion) << ','
            << to_string(r.outcome) << ',' << format_double(r.temperature) << ',' << format_double(r.ms) << '\n';
    }
}

RunResult run_mils(const Instance &instance, int m, const SearchConfig &config) {
    const int n = instance.num_cities();
    if (m < 1 || m > n)
        throw std::invalid_argument("m = " + std::to_string(m) + " is not in [1, " + std::to_string(n) + "]");

    const auto start = Clock::now();
    const NeighborList neighbors(instance, config.alpha);
    Rng rng(config.seed);
    LocalSearch search(instance, neighbors, config.local_search);
    MoveFrequency frequency(n);
    OperatorStats removal_stats(kNumRemovalOps, config.bandit);
    OperatorStats insertion_stats(kNumInsertionOps, config.bandit);
    const long validate_every = config.validate_every > 0 ? config.validate_every : default_validate_period();

    RunResult result;
    Solution current = greedy_random_init(instance, m, neighbors, rng);
    Solution local = current;
    Solution &best = result.best;
    best = current;

    const double t0 = initial_temperature(std::max(current.makespan(), 1e-12), config.w, config.p_accept);
    Temperature temperature(t0, std::min(config.tf, t0), config.i_max);

    const StopRule &stop = config.stop;
    auto should_stop = [&]() {
        if (stop.iterations >= 0 && result.iterations >= stop.iterations) return true;
        if (stop.milliseconds >= 0.0 && ms_since(start) >= stop.milliseconds) return true;
        return stop.target && best.makespan() <= *stop.target + kImproveEps;
    };

    long iter = 0;  // within the current round
    // Operators of the previous perturbation, credited with this iteration's outcome.
    bool pending = false;
    RemovalOp pending_removal = RemovalOp::Shaw;
    InsertionOp pending_insertion = InsertionOp::Greedy;
    while (!should_stop()) {
        search.run(current, &frequency);
        if (current.makespan() < best.makespan() - kImproveEps && iter >= config.i_threshold)
            single_tour_improve(instance, neighbors, current, config.tour_improver, &frequency, config.local_search);

        const double f_current = current.makespan();
        const double temp_now = temperature.current();
        const Outcome outcome = accept(current, local, best, temp_now, rng);
        if (outcome == Outcome::NewGlobalBest) result.best_found_ms = ms_since(start);
        if (pending) {
            removal_stats.record(static_cast<int>(pending_removal), outcome);
            insertion_stats.record(static_cast<int>(pending_insertion), outcome);
        }
        ++result.iterations;
        if (result.iterations % config.segment_length == 0) {
            removal_stats.end_segment();
            insertion_stats.end_segment();
        }

        const auto removal = static_cast<RemovalOp>(removal_stats.select(rng));
        const auto insertion = static_cast<InsertionOp>(insertion_stats.select(rng));
        perturb(instance, neighbors, current, removal, insertion, config.perturbation, &frequency, rng);
        pending = true;
        pending_removal = removal;
        pending_insertion = insertion;

        if (config.record_trace) {
            result.trace.rows.push_back({result.iterations - 1, f_current, local.makespan(), best.makespan(), removal,
                                         insertion, outcome, temp_now, ms_since(start)});
        }
        if (result.iterations % validate_every == 0) check_feasible(instance, m, current, result.iterations);

        if (++iter > config.i_max) {
            current = greedy_random_init(instance, m, neighbors, rng);
            local = current;
            iter = 0;
            temperature.reset();
            frequency.decay();
            pending = false;
            ++result.restarts;
            if (config.record_trace) result.trace.restarts.push_back(result.iterations);
        } else {
            temperature.step();
        }
    }

    check_feasible(instance, m, best, result.iterations);
    result.elapsed_ms = ms_since(start);
    result.removal_weights = removal_stats.weights();
    result.insertion_weights = insertion_stats.weights();
    return result;
}

int worker_threads() {
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char *cap = std::getenv("MILS_THREADS")) {
        try {
            const int limit = std::stoi(cap);
            if (limit >= 1) threads = std::min(threads, limit);
        } catch (const std::exception &) {
            // An unparsable cap is ignored.
        }
    }
    return threads;
}

BatchSummary run_batch(const Instance &instance, int m, const SearchConfig &config, int runs) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    const auto start = Clock::now();
    std::vector<std::optional<RunResult>> results(static_cast<std::size_t>(runs));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(runs));
    std::atomic<int> next{0};

    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
            SearchConfig cfg = config;
            cfg.seed = config.seed + static_cast<std::uint64_t>(i);
            cfg.record_trace = false;
            try {
                results[static_cast<std::size_t>(i)] = run_mils(instance, m, cfg);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    const int threads = std::min(runs, worker_threads());
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &th : pool) th.join();
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);

    BatchSummary summary;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        const RunResult &r = *results[static_cast<std::size_t>(i)];
        const double value = r.best.makespan();
        summary.values.push_back(value);
        summary.iterations.push_back(r.iterations);
        summary.seeds.push_back(config.seed + static_cast<std::uint64_t>(i));
        sum += value;
        if (i == 0 || value < summary.best) {
            summary.best = value;
            summary.best_solution = r.best;
        }
    }
    summary.average = sum / runs;
    summary.wall_ms = ms_since(start);
    return summary;
}

}  // namespace mils
