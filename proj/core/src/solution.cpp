#include "mils/solution.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mils {

Solution::Solution(const Instance &instance, std::vector<Tour> tours) : tours_(std::move(tours)) {
    recompute_caches(instance);
}

double Solution::total_length() const {
    double sum = 0.0;
    for (double len : lengths_) sum += len;
    return sum;
}

void Solution::recompute_caches(const Instance &instance) {
    const std::size_t nv = static_cast<std::size_t>(instance.num_vertices());
    tour_of_.assign(nv, -1);
    pos_of_.assign(nv, -1);
    prefix_.resize(tours_.size());
    lengths_.resize(tours_.size());
    for (int t = 0; t < num_tours(); ++t) refresh_tour(instance, t);
    refresh_makespan();
}

void Solution::refresh_tour(const Instance &instance, int t) {
    const Tour &tour = tours_[static_cast<std::size_t>(t)];
    auto &prefix = prefix_[static_cast<std::size_t>(t)];
    prefix.resize(tour.size() + 2);
    prefix[0] = 0.0;
    int prev = kDepot;
    for (std::size_t i = 0; i < tour.size(); ++i) {
        const int city = tour[i];
        if (city <= 0 || city >= instance.num_vertices())
            throw std::out_of_range("tour references invalid city " + std::to_string(city));
        prefix[i + 1] = prefix[i] + instance.distance(prev, city);
        tour_of_[static_cast<std::size_t>(city)] = t;
        pos_of_[static_cast<std::size_t>(city)] = static_cast<int>(i);
        prev = city;
    }
    prefix[tour.size() + 1] = prefix[tour.size()] + (tour.empty() ? 0.0 : instance.distance(prev, kDepot));
    lengths_[static_cast<std::size_t>(t)] = prefix.back();
}

void Solution::refresh_makespan() {
    makespan_ = lengths_.empty() ? 0.0 : *std::max_element(lengths_.begin(), lengths_.end());
}

void Solution::replace_tour(const Instance &instance, int t, Tour tour) {
    for (int city : tours_[static_cast<std::size_t>(t)]) {
        // A city may already sit in another tour when a move rewrites two tours in sequence.
        if (tour_of_[static_cast<std::size_t>(city)] == t) {
            tour_of_[static_cast<std::size_t>(city)] = -1;
            pos_of_[static_cast<std::size_t>(city)] = -1;
        }
    }
    tours_[static_cast<std::size_t>(t)] = std::move(tour);
    refresh_tour(instance, t);
    refresh_makespan();
}

void Solution::remove_city(const Instance &instance, int city) {
    const int t = tour_of(city);
    if (t < 0) throw std::logic_error("remove_city: city " + std::to_string(city) + " is not assigned");
    Tour &tour = tours_[static_cast<std::size_t>(t)];
    tour.erase(tour.begin() + position_of(city));
    tour_of_[static_cast<std::size_t>(city)] = -1;
    pos_of_[static_cast<std::size_t>(city)] = -1;
    refresh_tour(instance, t);
    refresh_makespan();
}

void Solution::insert_city(const Instance &instance, int city, int t, int index) {
    if (tour_of(city) >= 0) throw std::logic_error("insert_city: city " + std::to_string(city) + " is already assigned");
    Tour &tour = tours_[static_cast<std::size_t>(t)];
    if (index < 0 || index > static_cast<int>(tour.size())) throw std::out_of_range("insert_city: bad position");
    tour.insert(tour.begin() + index, city);
    refresh_tour(instance, t);
    refresh_makespan();
}

double tour_length(const Instance &instance, const Tour &tour) {
    if (tour.empty()) return 0.0;
    double len = instance.distance(kDepot, tour.front());
    for (std::size_t i = 1; i < tour.size(); ++i) len += instance.distance(tour[i - 1], tour[i]);
    return len + instance.distance(tour.back(), kDepot);
}

double makespan(const Instance &instance, const std::vector<Tour> &tours) {
    double best = 0.0;
    for (const auto &tour : tours) best = std::max(best, tour_length(instance, tour));
    return best;
}

std::vector<Violation> validate(const Instance &instance, int m, const std::vector<Tour> &tours) {
    std::vector<Violation> out;
    if (static_cast<int>(tours.size()) != m) {
        out.push_back({Violation::Kind::TourCount, -1, -1,
                       "expected " + std::to_string(m) + " tours, found " + std::to_string(tours.size())});
    }
    const int n = instance.num_cities();
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t t = 0; t < tours.size(); ++t) {
        if (tours[t].empty())
            out.push_back({Violation::Kind::EmptyTour, static_cast<int>(t), -1, "empty tour " + std::to_string(t)});
        for (int city : tours[t]) {
            if (city < 1 || city > n) {
                out.push_back({Violation::Kind::InvalidCity, static_cast<int>(t), city,
                               "invalid city " + std::to_string(city)});
                continue;
            }
            if (++count[static_cast<std::size_t>(city)] == 2)
                out.push_back({Violation::Kind::DuplicateCity, static_cast<int>(t), city,
                               "duplicate city " + std::to_string(city)});
        }
    }
    for (int city = 1; city <= n; ++city) {
        if (count[static_cast<std::size_t>(city)] == 0)
            out.push_back({Violation::Kind::MissingCity, -1, city, "missing city " + std::to_string(city)});
    }
    return out;
}

Solution greedy_random_init(const Instance &instance, int m, const NeighborList &neighbors, Rng &rng) {
    const int n = instance.num_cities();
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (m > n) throw std::invalid_argument("infeasible instance: m = " + std::to_string(m) +
                                           " exceeds the number of cities " + std::to_string(n));

    std::vector<int> unassigned(static_cast<std::size_t>(n));
    for (int c = 1; c <= n; ++c) unassigned[static_cast<std::size_t>(c - 1)] = c;
    std::vector<int> slot(static_cast<std::size_t>(n) + 1);  // index into `unassigned`, for O(1) removal
    for (int c = 1; c <= n; ++c) slot[static_cast<std::size_t>(c)] = c - 1;
    std::vector<char> assigned(static_cast<std::size_t>(n) + 1, 0);
    auto take = [&](int city) {
        const int i = slot[static_cast<std::size_t>(city)];
        const int last = unassigned.back();
        unassigned[static_cast<std::size_t>(i)] = last;
        slot[static_cast<std::size_t>(last)] = i;
        unassigned.pop_back();
        assigned[static_cast<std::size_t>(city)] = 1;
    };

    std::vector<Tour> tours(static_cast<std::size_t>(m));
    std::vector<double> lengths(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        const int city = unassigned[rng.below(unassigned.size())];
        take(city);
        tours[static_cast<std::size_t>(t)].push_back(city);
        lengths[static_cast<std::size_t>(t)] = 2.0 * instance.distance(kDepot, city);
    }

    while (!unassigned.empty()) {
        std::size_t shortest = 0;
        for (std::size_t t = 1; t < lengths.size(); ++t) {
            if (lengths[t] < lengths[shortest] - kImproveEps) shortest = t;
        }
        const int v = tours[shortest].back();
        const double base = instance.distance(v, kDepot);
        auto increase = [&](int u) { return instance.distance(v, u) + instance.distance(u, kDepot) - base; };

        int best = -1;
        double best_inc = 0.0;
        auto consider = [&](int u) {
            const double inc = increase(u);
            if (best < 0 || inc < best_inc - kImproveEps || (inc <= best_inc + kImproveEps && u < best)) {
                best = u;
                best_inc = inc;
            }
        };
        for (int u : neighbors.of(v)) {
            if (u != kDepot && !assigned[static_cast<std::size_t>(u)]) consider(u);
        }
        if (best < 0) {
            for (int u : unassigned) consider(u);
        }
        take(best);
        tours[shortest].push_back(best);
        lengths[shortest] += best_inc;
    }
    return Solution(instance, std::move(tours));
}

void write_solution(std::ostream &out, const SolutionFile &file) {
    out << file.name << ' ' << file.m << ' ' << format_double(file.objective) << '\n';
    for (const auto &tour : file.tours) {
        for (std::size_t i = 0; i < tour.size(); ++i) out << (i ? " " : "") << tour[i];
        out << '\n';
    }
}

SolutionFile read_solution(std::istream &in) {
    SolutionFile file;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("solution file is empty");
    {
        std::istringstream header(line);
        std::string objective;
        if (!(header >> file.name >> file.m >> objective))
            throw std::runtime_error("solution header must be 'NAME m OBJECTIVE'");
        const auto [ptr, ec] = std::from_chars(objective.data(), objective.data() + objective.size(), file.objective);
        if (ec != std::errc{} || ptr != objective.data() + objective.size())
            throw std::runtime_error("invalid objective '" + objective + "' in solution header");
    }
    while (std::getline(in, line)) {
        std::istringstream row(line);
        Tour tour;
        int city = 0;
        while (row >> city) tour.push_back(city);
        if (!row.eof()) throw std::runtime_error("non-numeric entry in tour line '" + line + "'");
        file.tours.push_back(std::move(tour));
    }
    return file;
}

}  // namespace mils
