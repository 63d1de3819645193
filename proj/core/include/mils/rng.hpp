#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace mils {

/// Seeded pseudo-random source shared by every stochastic component.
///
/// The draws are defined in terms of raw 64-bit engine output rather than
/// the std distributions, whose algorithms are implementation-defined, so a
/// fixed seed yields the same run on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Requires n > 0.
    std::size_t below(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return static_cast<std::size_t>(draw % bound);
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mils
