#pragma once

#include "mils/instance.hpp"
#include "mils/local_search.hpp"
#include "mils/rng.hpp"
#include "mils/solution.hpp"

#include <string_view>
#include <vector>

namespace mils {

enum class RemovalOp { Shaw, Random, Cross, Worst, Information };
enum class InsertionOp { Greedy, Blink, Regret };
inline constexpr int kNumRemovalOps = 5;
inline constexpr int kNumInsertionOps = 3;

std::string_view to_string(RemovalOp op);
std::string_view to_string(InsertionOp op);

struct PerturbationParams {
    double l = 0.15;  // fraction of cities removed
    double gamma_shaw = 6.0;
    double gamma_cross = 6.0;
    double gamma_worst = 3.0;
    double gamma_information = 6.0;
    double beta = 0.01;  // blink probability
    int regret_k = 3;
};

/// floor(l * n).
int removal_count(int num_cities, double l);

/// Index floor(y^gamma * size) into a candidate list, y uniform in [0, 1).
std::size_t biased_index(Rng &rng, double gamma, std::size_t size);

// Removal operators. Each removes up to `count` cities from `solution` and
// returns them in removal order. A city that is the last one of its tour is
// never removed; the next candidate in list order is taken instead, so fewer
// than `count` cities come back only if every remaining city is such a
// singleton.
std::vector<int> shaw_removal(const Instance &instance, Solution &solution, int count, double gamma, Rng &rng);
std::vector<int> random_removal(const Instance &instance, Solution &solution, int count, Rng &rng);
std::vector<int> cross_removal(const Instance &instance, const NeighborList &neighbors, Solution &solution, int count,
                               double gamma, Rng &rng);
std::vector<int> worst_removal(const Instance &instance, Solution &solution, int count, double gamma, Rng &rng);
std::vector<int> information_removal(const Instance &instance, Solution &solution, const MoveFrequency *frequency,
                                     int count, double gamma, Rng &rng);

/// Number of alpha neighbours of `city` served by a different tour.
int cross_score(const Solution &solution, const NeighborList &neighbors, int city);
/// Length saved by taking `city` out of its tour.
double removal_saving(const Instance &instance, const Solution &solution, int city);

/// Place where a city can be inserted: 0-based index inside tour `tour`.
struct InsertionPosition {
    int tour = -1;
    int index = 0;
    /// Length of the receiving tour after the insertion.
    double cost = 0.0;
};

/// Positions adjacent to the city's assigned alpha neighbours (the depot
/// stands for the start and end of every tour), or every position of every
/// tour when no neighbour is assigned. Sorted by (tour, index), no duplicates.
std::vector<InsertionPosition> candidate_positions(const Instance &instance, const NeighborList &neighbors,
                                                   const Solution &solution, int city);

// Insertion operators. Cities are reinserted into `solution` at the position
// that yields the shortest receiving tour.
void greedy_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                      const std::vector<int> &removed);
void blink_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                     const std::vector<int> &removed, double beta, Rng &rng);
void regret_insertion(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                      const std::vector<int> &removed, int k);

std::vector<int> apply_removal(RemovalOp op, const Instance &instance, const NeighborList &neighbors,
                               Solution &solution, const PerturbationParams &params, const MoveFrequency *frequency,
                               Rng &rng);
void apply_insertion(InsertionOp op, const Instance &instance, const NeighborList &neighbors, Solution &solution,
                     const std::vector<int> &removed, const PerturbationParams &params, Rng &rng);

/// Ruin and recreate: removal `removal` followed by insertion `insertion`.
void perturb(const Instance &instance, const NeighborList &neighbors, Solution &solution, RemovalOp removal,
             InsertionOp insertion, const PerturbationParams &params, const MoveFrequency *frequency, Rng &rng);

}  // namespace mils
