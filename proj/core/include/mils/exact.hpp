#pragma once

#include "mils/instance.hpp"
#include "mils/solution.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mils {

/// Largest number of cities brute_force_opt accepts.
inline constexpr int kExactMaxCities = 14;

struct ExactResult {
    double makespan = 0.0;
    std::vector<Tour> tours;
};

/// Shortest depot-anchored tour through `cities` by Held-Karp dynamic
/// programming. At most 16 cities.
Tour held_karp_tour(const Instance &instance, const std::vector<int> &cities);

/// Optimal minmax solution: Held-Karp length for every city subset followed
/// by a dynamic program over partitions into m nonempty subsets. Throws
/// std::invalid_argument above kExactMaxCities cities or when m > n.
ExactResult brute_force_opt(const Instance &instance, int m);

/// Writes the flow formulation with MTZ rank constraints in CPLEX LP format.
void export_lp(std::ostream &out, const Instance &instance, int m);
std::string export_lp(const Instance &instance, int m);

enum class ConstraintFamily { Length, Assignment, DepotOut, Flow, DepotIn, Mtz, Binary };
std::string_view to_string(ConstraintFamily family);

struct ModelViolation {
    ConstraintFamily family;
    std::string message;
};

/// Maps tours onto arc variables x, ranks u (position in tour) and the
/// makespan variable C, then checks every constraint family. C defaults to
/// the longest tour. Only the first m tours map to salesmen. Empty result
/// means feasible.
std::vector<ModelViolation> check_model_feasibility(const Instance &instance, int m, const std::vector<Tour> &tours,
                                                    std::optional<double> makespan = std::nullopt);

}  // namespace mils
