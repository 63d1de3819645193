#include "mils/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mils {

double initial_temperature(double f_init, double w, double p_accept) {
    if (!(p_accept > 0.0 && p_accept < 1.0)) throw std::invalid_argument("p_accept must lie in (0, 1)");
    if (!(f_init > 0.0) || !(w > 0.0)) throw std::invalid_argument("f_init and w must be positive");
    return -w * f_init / std::log(p_accept);
}

double cooling_factor(double t0, double tf, long i_max) {
    if (!(tf > 0.0) || !(tf < t0)) throw std::invalid_argument("cooling requires 0 < Tf < T0");
    if (i_max < 1) throw std::invalid_argument("I_max must be at least 1");
    return std::pow(tf / t0, 1.0 / static_cast<double>(i_max));
}

Temperature::Temperature(double t0, double tf, long i_max)
    : t0_(t0), tf_(std::min(tf, t0)), c_(tf < t0 ? cooling_factor(t0, tf, i_max) : 1.0), current_(t0) {
    if (!(t0 > 0.0) || !(tf > 0.0)) throw std::invalid_argument("temperatures must be positive");
}

void Temperature::step() {
    ++steps_;
    // Computed from T0 rather than by repeated multiplication so the schedule does not drift.
    current_ = std::max(tf_, t0_ * std::pow(c_, static_cast<double>(steps_)));
}

void Temperature::reset() {
    steps_ = 0;
    current_ = t0_;
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::NewGlobalBest: return "new_global_best";
        case Outcome::ImprovedLocal: return "improved_local";
        case Outcome::Accepted: return "accepted";
        case Outcome::Rejected: return "rejected";
    }
    return "rejected";
}

Outcome accept(Solution &current, Solution &local, Solution &best, double temperature, Rng &rng) {
    const double f = current.makespan();
    if (f < best.makespan() - kImproveEps) {
        best = current;
        local = current;
        return Outcome::NewGlobalBest;
    }
    if (f < local.makespan() - kImproveEps) {
        local = current;
        return Outcome::ImprovedLocal;
    }
    const double delta = f - local.makespan();
    const double r = rng.uniform();
    if (std::exp(-delta / temperature) > r) {
        local = current;
        return Outcome::Accepted;
    }
    current = local;
    return Outcome::Rejected;
}

}  // namespace mils
