#include "mils/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mils {

std::string_view to_string(RemovalOp op) {
    switch (op) {
        case RemovalOp::Shaw: return "shaw";
        case RemovalOp::Random: return "random";
        case RemovalOp::Cross: return "cross";
        case RemovalOp::Worst: return "worst";
        case RemovalOp::Information: return "information";
    }
    return "shaw";
}

std::string_view to_string(InsertionOp op) {
    switch (op) {
        case InsertionOp::Greedy: return "greedy";
        case InsertionOp::Blink: return "blink";
        case InsertionOp::Regret: return "regret";
    }
    return "greedy";
}

int removal_count(int num_cities, double l) {
    return static_cast<int>(std::floor(l * static_cast<double>(num_cities)));
}

std::size_t biased_index(Rng &rng, double gamma, std::size_t size) {
    const double y = rng.uniform();
    const auto i = static_cast<std::size_t>(std::floor(std::pow(y, gamma) * static_cast<double>(size)));
    return std::min(i, size - 1);
}

namespace {

bool removable(const Solution &solution, int city) {
    const int t = solution.tour_of(city);
    return t >= 0 && solution.tour_size(t) > 1;
}

// First removable entry at or after `start`, wrapping; -1 if none.
int pick_from(const Solution &solution, const std::vector<int> &list, std::size_t start) {
    for (std::size_t j = 0; j < list.size(); ++j) {
        const std::size_t i = (start + j) % list.size();
        if (removable(solution, list[i])) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> assigned_cities(const Solution &solution) {
    std::vector<int> out;
    for (int c = 1; c <= solution.num_cities(); ++c)
        if (solution.tour_of(c) >= 0) out.push_back(c);
    return out;
}

// Repeated biased picks from a list whose order never changes.
std::vector<int> remove_biased_static(const Instance &instance, Solution &solution, std::vector<int> list, int count,
                                      double gamma, Rng &rng) {
    std::vector<int> removed;
    while (static_cast<int>(removed.size()) < count && !list.empty()) {
        const int i = pick_from(solution, list, biased_index(rng, gamma, list.size()));
        if (i < 0) break;
        const int city = list[static_cast<std::size_t>(i)];
        list.erase(list.begin() + i);
        solution.remove_city(instance, city);
        removed.push_back(city);
    }
    return removed;
}

}  // namespace

std::vector<int> shaw_removal(const Instance &instance, Solution &solution, int count, double gamma, Rng &rng) {
    std::vector<int> removed;
    if (count <= 0) return removed;
    std::vector<int> list = assigned_cities(solution);
    if (list.empty()) return removed;
    const int seed_index = pick_from(solution, list, rng.below(list.size()));
    if (seed_index < 0) return removed;
    int last = list[static_cast<std::size_t>(seed_index)];
    list.erase(list.begin() + seed_index);
    solution.remove_city(instance, last);
    removed.push_back(last);

    while (static_cast<int>(removed.size()) < count && !list.empty()) {
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            const double da = instance.distance(last, a);
            const double db = instance.distance(last, b);
            return da < db || (da == db && a < b);
        });
        const int i = pick_from(solution, list, biased_index(rng, gamma, list.size()));
        if (i < 0) break;
        last = list[static_cast<std::size_t>(i)];
        list.erase(list.begin() + i);
        solution.remove_city(instance, last);
        removed.push_back(last);
    }
    return removed;
}

std::vector<int> random_removal(const Instance &instance, Solution &solution, int count, Rng &rng) {
    std::vector<int> list = assigned_cities(solution);
    for (std::size_t i = list.size(); i > 1; --i) std::swap(list[i - 1], list[rng.below(i)]);
    std::vector<int> removed;
    for (int city : list) {
        if (static_cast<int>(removed.size()) >= count) break;
        if (!removable(solution, city)) continue;
        solution.remove_city(instance, city);
        removed.push_back(city);
    }
    return removed;
}

int cross_score(const Solution &solution, const NeighborList &neighbors, int city) {
    const int t = solution.tour_of(city);
    int score = 0;
    for (int w : neighbors.of(city)) {
        if (w != kDepot && solution.tour_of(w) >= 0 && solution.tour_of(w) != t) ++score;
    }
    return score;
}

std::vector<int> cross_removal(const Instance &instance, const NeighborList &neighbors, Solution &solution, int count,
                               double gamma, Rng &rng) {
    if (count <= 0) return {};
    std::vector<int> list = assigned_cities(solution);
    std::vector<int> score(static_cast<std::size_t>(solution.num_cities()) + 1, 0);
    for (int c : list) score[static_cast<std::size_t>(c)] = cross_score(solution, neighbors, c);
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
    return remove_biased_static(instance, solution, std::move(list), count, gamma, rng);
}

double removal_saving(const Instance &instance, const Solution &solution, int city) {
    const int t = solution.tour_of(city);
    const int e = solution.position_of(city) + 1;
    const int prev = solution.at(t, e - 1);
    const int next = solution.at(t, e + 1);
    return instance.distance(prev, city) + instance.distance(city, next) - instance.distance(prev, next);
}

std::vector<int> worst_removal(const Instance &instance, Solution &solution, int count, double gamma, Rng &rng) {
    std::vector<int> removed;
    if (count <= 0) return removed;
    std::vector<int> list = assigned_cities(solution);
    std::vector<double> saving(static_cast<std::size_t>(solution.num_cities()) + 1, 0.0);
    for (int c : list) saving[static_cast<std::size_t>(c)] = removal_saving(instance, solution, c);

    while (static_cast<int>(removed.size()) < count && !list.empty()) {
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            const double sa = saving[static_cast<std::size_t>(a)];
            const double sb = saving[static_cast<std::size_t>(b)];
            return sa > sb || (sa == sb && a < b);
        });
        const int i = pick_from(solution, list, biased_index(rng, gamma, list.size()));
        if (i < 0) break;
        const int city = list[static_cast<std::size_t>(i)];
        const int t = solution.tour_of(city);
        list.erase(list.begin() + i);
        solution.remove_city(instance, city);
        removed.push_back(city);
        for (int c : solution.tour(t)) saving[static_cast<std::size_t>(c)] = removal_saving(instance, solution, c);
    }
    return removed;
}

std::vector<int> information_removal(const Instance &instance, Solution &solution, const MoveFrequency *frequency,
                                     int count, double gamma, Rng &rng) {
    if (count <= 0) return {};
    std::vector<int> list = assigned_cities(solution);
    if (frequency && !frequency->counts().empty()) {
        std::stable_sort(list.begin(), list.end(),
                         [&](int a, int b) { return frequency->count(a) > frequency->count(b); });
    }
    return remove_biased_static(instance, solution, std::move(list), count, gamma, rng);
}

namespace {

double insertion_cost(const Instance &instance, const Solution &solution, int city, int tour, int index) {
    const int prev = solution.at(tour, index);
    const int next = solution.at(tour, index + 1);
    return solution.tour_length(tour) + instance.distance(prev, city) + instance.distance(city, next) -
           instance.distance(prev, next);
}

}  // namespace

std::vector<InsertionPosition> candidate_positions(const Instance &instance, const NeighborList &neighbors,
                                                   const Solution &solution, int city) {
    std::vector<InsertionPosition> out;
    for (int w : neighbors.of(city)) {
        if (w == kDepot) {
            for (int t = 0; t < solution.num_tours(); ++t) {
                out.push_back({t, 0, 0.0});
                out.push_back({t, solution.tour_size(t), 0.0});
            }
        } else if (solution.tour_of(w) >= 0) {
            const int t = solution.tour_of(w);
            const int p = solution.position_of(w);
            out.push_back({t, p, 0.0});
            out.push_back({t, p + 1, 0.0});
        }
    }
    if (out.empty()) {
        for (int t = 0; t < solution.num_tours(); ++t)
            for (int i = 0; i <= solution.tour_size(t); ++i) out.push_back({t, i, 0.0});
    }
    std::sort(out.begin(), out.end(), [](const InsertionPosition &a, const InsertionPosition &b) {
        return a.tour < b.tour || (a.tour == b.tour && a.index < b.index);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const InsertionPosition &a, const InsertionPosition &b) {
                              return a.tour == b.tour && a.index == b.index;
                          }),
              out.end());
    for (auto &p : out) p.cost = insertion_cost(instance, solution, city, p.tour, p.index);
    return out;
}

void greedy_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                      const std::vector<int> &removed) {
    for (int city : removed) {
        const auto positions = candidate_positions(instance, neighbors, solution, city);
        const InsertionPosition *best = &positions.front();
        for (const auto &p : positions)
            if (p.cost < best->cost - kImproveEps) best = &p;
        solution.insert_city(instance, city, best->tour, best->index);
    }
}

void blink_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                     const std::vector<int> &removed, double beta, Rng &rng) {
    for (int city : removed) {
        const auto positions = candidate_positions(instance, neighbors, solution, city);
        const InsertionPosition *best = nullptr;
        const InsertionPosition *fallback = &positions.front();
        for (const auto &p : positions) {
            if (p.cost < fallback->cost - kImproveEps) fallback = &p;
            if (rng.bernoulli(beta)) continue;
            if (!best || p.cost < best->cost - kImproveEps) best = &p;
        }
        if (!best) best = fallback;
        solution.insert_city(instance, city, best->tour, best->index);
    }
}

void regret_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                      const std::vector<int> &removed, int k) {
    if (k < 2) throw std::invalid_argument("regret depth must be at least 2");
    std::vector<int> pending = removed;
    std::vector<double> costs;
    while (!pending.empty()) {
        std::size_t chosen = 0;
        InsertionPosition chosen_pos;
        double chosen_regret = -1.0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const int city = pending[i];
            const auto positions = candidate_positions(instance, neighbors, solution, city);
            costs.clear();
            for (const auto &p : positions) costs.push_back(p.cost);
            const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k), costs.size());
            std::partial_sort(costs.begin(), costs.begin() + static_cast<std::ptrdiff_t>(depth), costs.end());
            const double worst = *std::max_element(costs.begin(), costs.end());
            double regret = 0.0;
            for (int q = 1; q < k; ++q) {
                const double cq = static_cast<std::size_t>(q) < costs.size() ? costs[static_cast<std::size_t>(q)] : worst;
                regret += cq - costs[0];
            }
            const InsertionPosition *best = &positions.front();
            for (const auto &p : positions)
                if (p.cost < best->cost - kImproveEps) best = &p;

            bool take = chosen_regret < 0.0;
            if (!take) {
                if (regret > chosen_regret + kImproveEps) take = true;
                else if (regret >= chosen_regret - kImproveEps) {
                    if (best->cost > chosen_pos.cost + kImproveEps) take = true;
                    else if (best->cost >= chosen_pos.cost - kImproveEps && city < pending[chosen]) take = true;
                }
            }
            if (take) {
                chosen = i;
                chosen_pos = *best;
                chosen_regret = regret;
            }
        }
        solution.insert_city(instance, pending[chosen], chosen_pos.tour, chosen_pos.index);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
}

std::vector<int> apply_removal(RemovalOp op, const Instance &instance, const NeighborList &neighbors,
                               Solution &solution, const PerturbationParams &params, const MoveFrequency *frequency,
                               Rng &rng) {
    const int count = removal_count(instance.num_cities(), params.l);
    switch (op) {
        case RemovalOp::Shaw: return shaw_removal(instance, solution, count, params.gamma_shaw, rng);
        case RemovalOp::Random: return random_removal(instance, solution, count, rng);
        case RemovalOp::Cross: return cross_removal(instance, neighbors, solution, count, params.gamma_cross, rng);
        case RemovalOp::Worst: return worst_removal(instance, solution, count, params.gamma_worst, rng);
        case RemovalOp::Information:
            return information_removal(instance, solution, frequency, count, params.gamma_information, rng);
    }
    return {};
}

void apply_insertion(InsertionOp op, const Instance &instance, const NeighborList &neighbors, Solution &solution,
                     const std::vector<int> &removed, const PerturbationParams &params, Rng &rng) {
    switch (op) {
        case InsertionOp::Greedy: greedy_insertion(instance, neighbors, solution, removed); break;
        case InsertionOp::Blink: blink_insertion(instance, neighbors, solution, removed, params.beta, rng); break;
        case InsertionOp::Regret: regret_insertion(instance, neighbors, solution, removed, params.regret_k); break;
    }
}

void perturb(const Instance &instance, const NeighborList &neighbors, Solution &solution, RemovalOp removal,
             InsertionOp insertion, const PerturbationParams &params, const MoveFrequency *frequency, Rng &rng) {
    const auto removed = apply_removal(removal, instance, neighbors, solution, params, frequency, rng);
    apply_insertion(insertion, instance, neighbors, solution, removed, params, rng);
}

}  // namespace mils
