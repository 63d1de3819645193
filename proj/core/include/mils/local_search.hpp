#pragma once

#include "mils/instance.hpp"
#include "mils/solution.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace mils {

/// The ten neighbourhoods, scanned in this order. x is the successor of u
/// and y the successor of v at evaluation time.
enum class MoveKind : std::uint8_t {
    M1,   // relocate u after v
    M2,   // relocate (u, x) after v
    M3,   // relocate reversed (x, u) before v
    M4,   // swap x and v
    M5,   // swap (u, x) with v
    M6,   // swap (u, x) with (v, y)
    M7,   // reversed (u, x) takes v's place, (v, y) takes u's place
    M8,   // intra-tour 2-opt on edges (u, x) and (v, y)
    M9,   // 2-opt*: tails exchanged
    M10,  // 2-opt*: heads joined reversed
};

inline constexpr int kNumMoveKinds = 10;
std::string_view to_string(MoveKind kind);

/// Extended positions [a, b] of a source tour, possibly reversed.
struct Segment {
    int tour = -1;
    int a = 0;
    int b = -1;
    bool reversed = false;
};

/// The new city sequence of one tour as a concatenation of old segments.
struct TourPlan {
    int tour = -1;
    int count = 0;
    std::array<Segment, 5> segments{};
    double new_length = 0.0;
};

struct Move {
    MoveKind kind = MoveKind::M1;
    int u = -1;
    int v = -1;
    int x = -1;
    int y = -1;
    int tu = -1;
    int tv = -1;
    int pu = 0;  // extended positions at evaluation time
    int pv = 0;
    int size_u = 0;
    int size_v = 0;
    int num_plans = 0;
    std::array<TourPlan, 2> plans{};
    /// max(new lengths) - max(old lengths) over the affected tours.
    double delta_metric = 0.0;
    /// Change in the summed length of all tours.
    double delta_total = 0.0;

    bool improving() const { return delta_metric < -kImproveEps; }
};

/// Evaluates one move in O(1) from cached prefix sums. When v is the depot,
/// tv selects the tour whose leaving depot plays the role of v (the
/// returning depot for M3); otherwise tv is ignored. Returns nullopt when
/// the move's structural preconditions do not hold.
std::optional<Move> evaluate_move(const Instance &instance, const Solution &solution, MoveKind kind, int u,
                                  int v, int tv = -1);

/// Applies an evaluated move. Throws std::logic_error if the solution no
/// longer matches the state the move was evaluated against.
void apply_move(const Instance &instance, Solution &solution, const Move &move);

/// Cities that are endpoints of an edge removed or created by the move.
std::vector<int> touched_cities(const Solution &before, const Move &move);

/// Per-city count of participations in applied local-search moves.
class MoveFrequency {
public:
    MoveFrequency() = default;
    explicit MoveFrequency(int num_cities) : counts_(static_cast<std::size_t>(num_cities) + 1, 0) {}

    void record(int vertex) {
        if (vertex > 0) ++counts_[static_cast<std::size_t>(vertex)];
    }
    std::uint64_t count(int city) const { return counts_[static_cast<std::size_t>(city)]; }
    const std::vector<std::uint64_t> &counts() const { return counts_; }
    /// Halves every counter.
    void decay() {
        for (auto &c : counts_) c /= 2;
    }

private:
    std::vector<std::uint64_t> counts_;
};

enum class ImprovementStrategy { Best, First };

struct LocalSearchOptions {
    ImprovementStrategy strategy = ImprovementStrategy::Best;
    bool dont_look_bits = true;
};

struct LocalSearchStats {
    long moves = 0;
    long evaluations = 0;
    std::array<long, kNumMoveKinds> moves_by_kind{};
};

/// Variable neighbourhood descent over M1..M10 restricted to alpha-nearest
/// candidates. After every applied move the scan restarts at M1. Returns a
/// local optimum of all ten neighbourhoods.
class LocalSearch {
public:
    LocalSearch(const Instance &instance, const NeighborList &neighbors, LocalSearchOptions options = {});

    LocalSearchStats run(Solution &solution, MoveFrequency *frequency = nullptr);

    const LocalSearchOptions &options() const { return options_; }

private:
    /// Best (or first) improving move of one neighbourhood, updating the
    /// don't-look masks of the scanned cities.
    std::optional<Move> scan(const Solution &solution, MoveKind kind, bool &skipped, long &evaluations);
    void consider(const Solution &solution, MoveKind kind, int u, int v, int tv, std::optional<Move> &best,
                  bool &found, long &evaluations) const;

    const Instance &instance_;
    const NeighborList &neighbors_;
    LocalSearchOptions options_;
    std::vector<std::uint16_t> clean_;  // bit k: city has no improving move in neighbourhood k
};

/// Convenience wrapper constructing a LocalSearch for a single call.
LocalSearchStats local_search(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                              MoveFrequency *frequency = nullptr, LocalSearchOptions options = {});

}  // namespace mils
