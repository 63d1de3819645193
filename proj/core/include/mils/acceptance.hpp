#pragma once

#include "mils/rng.hpp"
#include "mils/solution.hpp"

#include <string_view>

namespace mils {

/// T0 such that a worsening of w * f_init is accepted with probability p_accept.
double initial_temperature(double f_init, double w, double p_accept);

/// Factor c with T0 * c^i_max == Tf.
double cooling_factor(double t0, double tf, long i_max);

/// Geometric schedule from T0 down to Tf over i_max steps, clamped at Tf.
class Temperature {
public:
    Temperature(double t0, double tf, long i_max);

    double current() const { return current_; }
    double initial() const { return t0_; }
    double final_value() const { return tf_; }
    double factor() const { return c_; }
    long steps() const { return steps_; }

    void step();
    void reset();

private:
    double t0_;
    double tf_;
    double c_;
    long steps_ = 0;
    double current_;
};

enum class Outcome { NewGlobalBest, ImprovedLocal, Accepted, Rejected };
std::string_view to_string(Outcome outcome);

/// One acceptance decision. `current` is the freshly improved solution,
/// `local` the incumbent it competes with and `best` the global best. On
/// rejection `current` is reset to `local`.
Outcome accept(Solution &current, Solution &local, Solution &best, double temperature, Rng &rng);

}  // namespace mils
