#pragma once

#include "mils/driver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace mils::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // run failed or solution invalid
inline constexpr int kExitUsage = 2;    // bad flags or unreadable input

struct Budget {
    long iterations = -1;
    double milliseconds = -1.0;
    bool paper = false;  // (n / 100) * 4 minutes, resolved once n is known
};

/// Parses "iters:N", "ms:N" or "paper". Returns nullopt on anything else.
std::optional<Budget> parse_budget(std::string_view text);

/// Stop rule for an instance with n cities.
StopRule to_stop_rule(const Budget &budget, int num_cities);

/// Runs the `mils` command line. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace mils::cli
