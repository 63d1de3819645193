#pragma once

#include "mils/instance.hpp"
#include "mils/local_search.hpp"
#include "mils/solution.hpp"

#include <string>

namespace mils {

enum class TourImproverKind { Builtin, External };

/// How a single tour is optimized as a standalone TSP.
///
/// The external kind runs `command <in.tsp> <out.tour>`: the input holds the
/// depot as node 1 followed by the tour's cities, the output lists node ids
/// (1-based, one per line) in visiting order. Any failure falls back to the
/// builtin 2-opt / Or-opt descent.
struct TourImprover {
    TourImproverKind kind = TourImproverKind::Builtin;
    std::string command;
    int timeout_ms = 10000;
};

/// 2-opt and Or-opt (segments of 1 to 3 cities, both orientations) on the
/// depot-anchored cycle, restricted to alpha-nearest candidates, first
/// improvement until no move applies.
Tour two_opt_or_opt(const Instance &instance, const NeighborList &neighbors, const Tour &tour);

/// Runs the external solver. Returns false with `error` set on timeout,
/// nonzero exit or a malformed answer.
bool run_external_tour_solver(const Instance &instance, const Tour &tour, const std::string &command, int timeout_ms,
                              Tour &result, std::string &error);

/// Improves one tour; never returns a longer tour than the input.
Tour improve_tour(const Instance &instance, const NeighborList &neighbors, const Tour &tour,
                  const TourImprover &improver);

/// Improves every tour independently and then runs one local search.
LocalSearchStats single_tour_improve(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                                     const TourImprover &improver, MoveFrequency *frequency = nullptr,
                                     LocalSearchOptions options = {});

}  // namespace mils
