#pragma once

#include "mils/instance.hpp"
#include "mils/rng.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mils {

/// City sequence of one salesman; the depot is implicit at both ends.
using Tour = std::vector<int>;

/// Improvement threshold used wherever two objective values are compared.
inline constexpr double kImproveEps = 1e-9;

/// m depot-anchored tours with cached lengths and city locations.
///
/// Tours are addressed through "extended" positions: 0 is the leaving depot,
/// 1..len are the cities and len + 1 is the returning depot. prefix(t, e) is
/// the travelled distance from the depot up to extended position e, so any
/// contiguous stretch of a tour costs prefix(t, b) - prefix(t, a).
///
/// A Solution may temporarily hold unassigned cities (during ruin and
/// recreate); such cities report tour_of() == -1.
class Solution {
public:
    Solution() = default;
    Solution(const Instance &instance, std::vector<Tour> tours);

    int num_tours() const { return static_cast<int>(tours_.size()); }
    int num_cities() const { return static_cast<int>(tour_of_.size()) - 1; }
    const std::vector<Tour> &tours() const { return tours_; }
    const Tour &tour(int t) const { return tours_[static_cast<std::size_t>(t)]; }
    int tour_size(int t) const { return static_cast<int>(tours_[static_cast<std::size_t>(t)].size()); }

    double tour_length(int t) const { return lengths_[static_cast<std::size_t>(t)]; }
    const std::vector<double> &tour_lengths() const { return lengths_; }
    double makespan() const { return makespan_; }
    double total_length() const;

    int tour_of(int city) const { return tour_of_[static_cast<std::size_t>(city)]; }
    /// 0-based index of the city inside its tour.
    int position_of(int city) const { return pos_of_[static_cast<std::size_t>(city)]; }

    /// Vertex at extended position e of tour t (depot at both ends).
    int at(int t, int e) const {
        const Tour &tour = tours_[static_cast<std::size_t>(t)];
        return (e <= 0 || e > static_cast<int>(tour.size())) ? kDepot : tour[static_cast<std::size_t>(e - 1)];
    }
    double prefix(int t, int e) const {
        return prefix_[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)];
    }

    /// Rebuilds every cache from the tour sequences.
    void recompute_caches(const Instance &instance);

    void replace_tour(const Instance &instance, int t, Tour tour);
    void remove_city(const Instance &instance, int city);
    /// Inserts city so that it ends up at 0-based index `index` of tour t.
    void insert_city(const Instance &instance, int city, int t, int index);

    friend bool operator==(const Solution &a, const Solution &b) { return a.tours_ == b.tours_; }

private:
    void refresh_tour(const Instance &instance, int t);
    void refresh_makespan();

    std::vector<Tour> tours_;
    std::vector<std::vector<double>> prefix_;
    std::vector<double> lengths_;
    double makespan_ = 0.0;
    std::vector<int> tour_of_;
    std::vector<int> pos_of_;
};

inline double objective(const Solution &solution) { return solution.makespan(); }

/// Length of a depot-anchored tour computed from scratch.
double tour_length(const Instance &instance, const Tour &tour);
/// Makespan computed from scratch; independent of any cached state.
double makespan(const Instance &instance, const std::vector<Tour> &tours);

struct Violation {
    enum class Kind { TourCount, EmptyTour, DuplicateCity, MissingCity, InvalidCity };
    Kind kind;
    int tour = -1;
    int city = -1;
    std::string message;
};

/// Every broken feasibility rule; empty means the tours form a valid m-tour solution.
std::vector<Violation> validate(const Instance &instance, int m, const std::vector<Tour> &tours);
inline std::vector<Violation> validate(const Instance &instance, int m, const Solution &solution) {
    return validate(instance, m, solution.tours());
}

/// Randomized greedy construction: seed each tour with a random city, then
/// repeatedly extend the currently shortest tour by the cheapest of its last
/// city's alpha nearest unassigned cities.
Solution greedy_random_init(const Instance &instance, int m, const NeighborList &neighbors, Rng &rng);

/// Text format: header "NAME m OBJECTIVE" then one line of 1-based city
/// indices per tour.
struct SolutionFile {
    std::string name;
    int m = 0;
    double objective = 0.0;
    std::vector<Tour> tours;
};

void write_solution(std::ostream &out, const SolutionFile &file);
SolutionFile read_solution(std::istream &in);

}  // namespace mils
