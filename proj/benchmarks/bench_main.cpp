#include "mils/driver.hpp"
#include "mils/local_search.hpp"
#include "mils/perturbation.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>

namespace {

using namespace mils;

Solution random_solution(const Instance &inst, int m, Rng &rng) {
    std::vector<int> order(static_cast<std::size_t>(inst.num_cities()));
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<Tour> tours(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < order.size(); ++i) tours[i % tours.size()].push_back(order[i]);
    return Solution(inst, tours);
}

void BM_EvaluateMove(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = generate_random(n, 1000.0, 1);
    Rng rng(1);
    const Solution sol = random_solution(inst, 5, rng);
    const auto kind = static_cast<MoveKind>(state.range(1));
    for (auto _ : state) {
        const int u = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(n)));
        const int v = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(n)));
        benchmark::DoNotOptimize(evaluate_move(inst, sol, kind, u, v));
    }
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_EvaluateMove)->ArgsProduct({{100, 1000}, {0, 5, 7, 8, 9}});

void BM_LocalSearch(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const Instance inst = generate_random(n, 1000.0, 2);
    const NeighborList nb(inst, 10);
    Rng rng(2);
    LocalSearchOptions opts;
    opts.strategy = state.range(1) == 0 ? ImprovementStrategy::Best : ImprovementStrategy::First;
    for (auto _ : state) {
        state.PauseTiming();
        Solution sol = random_solution(inst, 5, rng);
        state.ResumeTiming();
        benchmark::DoNotOptimize(local_search(inst, nb, sol, nullptr, opts).moves);
    }
}
BENCHMARK(BM_LocalSearch)->ArgsProduct({{100, 500}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Perturb(benchmark::State &state) {
    const Instance inst = generate_random(200, 1000.0, 3);
    const NeighborList nb(inst, 10);
    Rng rng(3);
    Solution sol = greedy_random_init(inst, 5, nb, rng);
    MoveFrequency freq(inst.num_cities());
    const auto removal = static_cast<RemovalOp>(state.range(0));
    const auto insertion = static_cast<InsertionOp>(state.range(1));
    for (auto _ : state) perturb(inst, nb, sol, removal, insertion, {}, &freq, rng);
    state.SetLabel(std::string(to_string(removal)) + "/" + std::string(to_string(insertion)));
}
BENCHMARK(BM_Perturb)->ArgsProduct({{0, 1, 2, 3, 4}, {0, 1, 2}});

void BM_Iterations(benchmark::State &state) {
    const Instance inst = generate_random(static_cast<int>(state.range(0)), 1000.0, 4);
    SearchConfig config;
    config.stop.iterations = 200;
    for (auto _ : state) benchmark::DoNotOptimize(run_mils(inst, 5, config).best.makespan());
    state.SetItemsProcessed(state.iterations() * config.stop.iterations);
}
BENCHMARK(BM_Iterations)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
