#include "cli.hpp"

#include "mils/bks.hpp"
#include "mils/exact.hpp"
#include "mils/instance.hpp"
#include "mils/solution.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#ifndef MILS_DEFAULT_BKS
#define MILS_DEFAULT_BKS ""
#endif

namespace mils::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Error that maps to an exit code, raised by the command bodies.
struct CommandError {
    int code;
    std::string message;
};

struct SearchFlags {
    std::uint64_t seed = 1;
    std::string budget = "iters:5000";
    long iterations = -1;
    int alpha = 10;
    double l = 0.15;
    double epsilon = 0.01;
    double lambda = 0.5;
    bool invert_epsilon = false;
    long i_max = 40000;
    bool first_improvement = false;
    bool no_dont_look_bits = false;
    std::string tour_improver = "builtin";
    int tour_timeout_ms = 10000;
    std::string metric;
    std::string bks;
};

void add_search_flags(CLI::App *cmd, SearchFlags &f) {
    cmd->add_option("--seed", f.seed, "Base seed; run i uses seed + i");
    cmd->add_option("--budget", f.budget, "iters:N, ms:N or paper ((n/100) x 4 minutes)");
    cmd->add_option("--iterations", f.iterations, "Shorthand for --budget iters:N")->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", f.alpha, "Neighbour list width")->check(CLI::PositiveNumber);
    cmd->add_option("--l", f.l, "Fraction of cities removed per perturbation")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--epsilon", f.epsilon, "Operator exploration rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--lambda", f.lambda, "Weight given to the previous segment")->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--invert-epsilon", f.invert_epsilon, "Exploit with probability epsilon instead of 1 - epsilon");
    cmd->add_option("--i-max", f.i_max, "Iterations per round before a restart")->check(CLI::PositiveNumber);
    cmd->add_flag("--first-improvement", f.first_improvement, "Apply the first improving move instead of the best");
    cmd->add_flag("--no-dont-look-bits", f.no_dont_look_bits, "Scan every city in every local search round");
    cmd->add_option("--tour-improver", f.tour_improver,
                    "'builtin' or a command run as: <command> <in.tsp> <out.tour>");
    cmd->add_option("--tour-timeout-ms", f.tour_timeout_ms, "Time limit for the external tour improver")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--metric", f.metric, "Override the distance: real, rounded, ceil or att");
    cmd->add_option("--bks", f.bks, "Best-known values CSV (instance,m,bks,optimal)");
}

std::optional<Metric> metric_override(const SearchFlags &f) {
    if (f.metric.empty()) return std::nullopt;
    auto metric = metric_from_string(f.metric);
    if (!metric) throw CommandError{kExitUsage, "unknown metric '" + f.metric + "'"};
    return metric;
}

Instance load_instance(const std::string &path, std::optional<Metric> metric) {
    if (!fs::is_regular_file(path)) throw CommandError{kExitUsage, "cannot read instance file '" + path + "'"};
    try {
        return read_tsplib_file(path, metric);
    } catch (const ParseError &e) {
        throw CommandError{kExitUsage, path + ":" + std::to_string(e.line()) + ": " + e.what()};
    }
}

SearchConfig make_config(const SearchFlags &f, int num_cities) {
    SearchConfig config;
    config.seed = f.seed;
    config.alpha = f.alpha;
    config.i_max = f.i_max;
    config.perturbation.l = f.l;
    config.bandit.epsilon = f.epsilon;
    config.bandit.lambda = f.lambda;
    config.bandit.invert_epsilon = f.invert_epsilon;
    config.local_search.strategy = f.first_improvement ? ImprovementStrategy::First : ImprovementStrategy::Best;
    config.local_search.dont_look_bits = !f.no_dont_look_bits;
    if (f.tour_improver != "builtin") {
        config.tour_improver.kind = TourImproverKind::External;
        config.tour_improver.command = f.tour_improver;
    }
    config.tour_improver.timeout_ms = f.tour_timeout_ms;

    Budget budget;
    if (f.iterations >= 0) {
        budget.iterations = f.iterations;
    } else if (auto parsed = parse_budget(f.budget)) {
        budget = *parsed;
    } else {
        throw CommandError{kExitUsage, "bad budget '" + f.budget + "'; expected iters:N, ms:N or paper"};
    }
    config.stop = to_stop_rule(budget, num_cities);
    return config;
}

std::optional<BksRegistry> load_bks(const SearchFlags &f) {
    std::string path = f.bks;
    if (path.empty()) {
        if (const char *env = std::getenv("MILS_BKS")) path = env;
    }
    const bool explicit_path = !path.empty();
    if (path.empty()) path = MILS_DEFAULT_BKS;
    if (path.empty() || !fs::is_regular_file(path)) {
        if (explicit_path) throw CommandError{kExitUsage, "cannot read BKS file '" + path + "'"};
        return std::nullopt;
    }
    try {
        return BksRegistry::load(path);
    } catch (const std::exception &e) {
        throw CommandError{kExitUsage, path + ": " + e.what()};
    }
}

std::ofstream open_output(const std::string &path) {
    std::ofstream out(path);
    if (!out) throw CommandError{kExitUsage, "cannot write '" + path + "'"};
    return out;
}

void check_m(int m, const Instance &instance) {
    if (m < 1 || m > instance.num_cities())
        throw CommandError{kExitUsage, "--m must be in [1, " + std::to_string(instance.num_cities()) + "]"};
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string instance;
    int m = 0;
    int runs = 1;
    std::optional<double> target;
    std::string out;
    std::string summary;
    std::string trace;
    SearchFlags search;
};

int cmd_solve(const SolveArgs &a, std::ostream &out) {
    const Instance instance = load_instance(a.instance, metric_override(a.search));
    check_m(a.m, instance);
    if (!a.trace.empty() && a.runs != 1) throw CommandError{kExitUsage, "--trace needs --runs 1"};
    SearchConfig config = make_config(a.search, instance.num_cities());
    config.stop.target = a.target;
    const auto registry = load_bks(a.search);

    Solution best;
    double best_value = 0.0;
    double average = 0.0;
    double elapsed = 0.0;
    long iterations = 0;
    std::vector<double> values;
    if (a.runs == 1) {
        config.record_trace = !a.trace.empty();
        RunResult result = run_mils(instance, a.m, config);
        if (!a.trace.empty()) {
            auto trace_out = open_output(a.trace);
            write_trace_csv(trace_out, result.trace);
        }
        best = std::move(result.best);
        best_value = average = best.makespan();
        values.push_back(best_value);
        elapsed = result.elapsed_ms;
        iterations = result.iterations;
    } else {
        BatchSummary batch = run_batch(instance, a.m, config, a.runs);
        best = std::move(batch.best_solution);
        best_value = batch.best;
        average = batch.average;
        values = batch.values;
        elapsed = batch.wall_ms;
        for (long it : batch.iterations) iterations += it;
    }

    if (!a.out.empty()) {
        auto sol_out = open_output(a.out);
        write_solution(sol_out, {instance.name(), a.m, best_value, best.tours()});
    }

    json summary = {
        {"name", instance.name()},
        {"n", instance.num_cities()},
        {"m", a.m},
        {"best", best_value},
        {"average", average},
        {"runs", a.runs},
        {"values", values},
        {"time_ms", elapsed},
        {"iterations", iterations},
        {"seed", a.search.seed},
        {"metric", std::string(to_string(instance.metric()))},
    };
    if (registry) {
        if (auto entry = registry->find(instance.name(), a.m)) {
            summary["bks"] = entry->value;
            summary["optimal"] = entry->optimal;
            summary["gap_to_bks"] = gap_percent(best_value, entry->value);
        }
    }
    const std::string text = summary.dump(2);
    out << text << '\n';
    if (!a.summary.empty()) {
        auto summary_out = open_output(a.summary);
        summary_out << text << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string manifest;
    int runs = 1;
    std::string out;
    SearchFlags search;
};

struct ManifestEntry {
    std::string path;
    int m = 0;
};

std::vector<ManifestEntry> read_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw CommandError{kExitUsage, "cannot read manifest '" + path + "'"};
    const fs::path base = fs::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("instance,", 0) == 0) continue;
        const auto comma = line.find(',');
        ManifestEntry entry;
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing m");
            entry.m = std::stoi(line.substr(comma + 1));
        } catch (const std::exception &) {
            throw CommandError{kExitUsage, path + ":" + std::to_string(line_no) + ": expected '<instance path>,<m>'"};
        }
        fs::path p = line.substr(0, comma);
        entry.path = (p.is_relative() ? base / p : p).lexically_normal().string();
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << value;
    return s.str();
}

int cmd_bench(const BenchArgs &a, std::ostream &out, std::ostream &err) {
    const auto entries = read_manifest(a.manifest);
    const auto metric = metric_override(a.search);
    const auto registry = load_bks(a.search);
    // Budget errors are usage errors, so surface them before any run starts.
    make_config(a.search, 1);

    std::ostringstream csv;
    csv << "name,m,bks,best,avg,gap_pct,time_ms\n";
    int failures = 0;
    for (const auto &entry : entries) {
        std::string name = fs::path(entry.path).stem().string();
        std::string bks_text;
        try {
            const Instance instance = load_instance(entry.path, metric);
            name = instance.name();
            std::optional<BksEntry> bks;
            if (registry) bks = registry->find(name, entry.m);
            if (bks) bks_text = format_double(bks->value);
            check_m(entry.m, instance);
            const BatchSummary batch = run_batch(instance, entry.m, make_config(a.search, instance.num_cities()), a.runs);
            csv << name << ',' << entry.m << ',' << bks_text << ',' << format_double(batch.best) << ','
                << format_double(batch.average) << ',' << (bks ? fixed(gap_percent(batch.best, bks->value), 4) : "")
                << ',' << fixed(batch.wall_ms, 1) << '\n';
        } catch (const CommandError &e) {
            err << "mils bench: " << entry.path << ": " << e.message << '\n';
            csv << name << ',' << entry.m << ',' << bks_text << ",FAILED,,,\n";
            ++failures;
        } catch (const std::exception &e) {
            err << "mils bench: " << entry.path << ": " << e.what() << '\n';
            csv << name << ',' << entry.m << ',' << bks_text << ",FAILED,,,\n";
            ++failures;
        }
    }
    if (a.out.empty()) {
        out << csv.str();
    } else {
        auto file = open_output(a.out);
        file << csv.str();
    }
    return failures == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string instance;
    std::string solution;
    int m = 0;
    std::string metric;
};

int cmd_validate(const ValidateArgs &a, std::ostream &out) {
    SearchFlags flags;
    flags.metric = a.metric;
    const Instance instance = load_instance(a.instance, metric_override(flags));
    std::ifstream in(a.solution);
    if (!in) throw CommandError{kExitUsage, "cannot read solution file '" + a.solution + "'"};
    SolutionFile file;
    try {
        file = read_solution(in);
    } catch (const std::exception &e) {
        throw CommandError{kExitUsage, a.solution + ": " + e.what()};
    }
    const int m = a.m > 0 ? a.m : file.m;

    std::vector<std::string> problems;
    for (const auto &v : validate(instance, m, file.tours)) problems.push_back(v.message);
    if (problems.empty()) {
        for (const auto &v : check_model_feasibility(instance, m, file.tours))
            problems.push_back(std::string(to_string(v.family)) + ": " + v.message);
    }
    double value = 0.0;
    if (problems.empty()) {
        value = makespan(instance, file.tours);
        if (std::abs(value - file.objective) > 1e-6 * std::max(1.0, std::abs(value)))
            problems.push_back("objective " + format_double(file.objective) + " in the file, recomputed " +
                               format_double(value));
    }
    if (!problems.empty()) {
        out << "invalid\n";
        for (const auto &p : problems) out << "  " << p << '\n';
        return kExitFailure;
    }
    out << "valid " << format_double(value) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- export-lp, gen

int cmd_export_lp(const std::string &instance_path, int m, const std::string &metric, const std::string &path,
                  std::ostream &out) {
    SearchFlags flags;
    flags.metric = metric;
    const Instance instance = load_instance(instance_path, metric_override(flags));
    check_m(m, instance);
    if (path.empty()) {
        export_lp(out, instance, m);
    } else {
        auto file = open_output(path);
        export_lp(file, instance, m);
    }
    return kExitOk;
}

int cmd_gen(int n, double width, std::uint64_t seed, const std::string &name, const std::string &path,
            std::ostream &out) {
    const Instance instance = generate_random(n, width, seed, name);
    if (path.empty()) {
        write_tsplib(out, instance);
    } else {
        auto file = open_output(path);
        write_tsplib(file, instance);
    }
    return kExitOk;
}

}  // namespace

std::optional<Budget> parse_budget(std::string_view text) {
    if (text == "paper") return Budget{-1, -1.0, true};
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const std::string kind(text.substr(0, colon));
    const std::string value(text.substr(colon + 1));
    try {
        std::size_t used = 0;
        if (kind == "iters") {
            const long n = std::stol(value, &used);
            if (used != value.size() || n < 0) return std::nullopt;
            return Budget{n, -1.0, false};
        }
        if (kind == "ms") {
            const double ms = std::stod(value, &used);
            if (used != value.size() || !(ms >= 0.0)) return std::nullopt;
            return Budget{-1, ms, false};
        }
    } catch (const std::exception &) {
    }
    return std::nullopt;
}

StopRule to_stop_rule(const Budget &budget, int num_cities) {
    StopRule rule;
    rule.iterations = budget.iterations;
    rule.milliseconds = budget.milliseconds;
    if (budget.paper) rule.milliseconds = num_cities / 100.0 * 4.0 * 60'000.0;
    return rule;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Minmax multiple TSP solver"};
    app.name("mils");
    app.require_subcommand(1);

    SolveArgs solve;
    auto *solve_cmd = app.add_subcommand("solve", "Solve one instance and print a JSON summary");
    solve_cmd->add_option("instance", solve.instance, "TSPLIB file")->required();
    solve_cmd->add_option("--m", solve.m, "Number of salesmen")->required();
    solve_cmd->add_option("--runs", solve.runs, "Independent runs")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--target", solve.target, "Stop once the makespan reaches this value");
    solve_cmd->add_option("--out", solve.out, "Write the best solution here");
    solve_cmd->add_option("--summary", solve.summary, "Also write the JSON summary here");
    solve_cmd->add_option("--trace", solve.trace, "Per-iteration CSV (single run only)");
    add_search_flags(solve_cmd, solve.search);

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Run every manifest entry and print a CSV row each");
    bench_cmd->add_option("manifest", bench.manifest, "CSV of '<instance path>,<m>' lines")->required();
    bench_cmd->add_option("--runs", bench.runs, "Runs per instance")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", bench.out, "Write the CSV here instead of stdout");
    add_search_flags(bench_cmd, bench.search);

    ValidateArgs check;
    auto *validate_cmd = app.add_subcommand("validate", "Check a solution file against an instance");
    validate_cmd->add_option("instance", check.instance, "TSPLIB file")->required();
    validate_cmd->add_option("solution", check.solution, "Solution file")->required();
    validate_cmd->add_option("--m", check.m, "Expected tour count (default: the file header)");
    validate_cmd->add_option("--metric", check.metric, "Override the distance: real, rounded, ceil or att");

    std::string lp_instance, lp_out, lp_metric;
    int lp_m = 0;
    auto *lp_cmd = app.add_subcommand("export-lp", "Write the mixed-integer model in CPLEX LP format");
    lp_cmd->add_option("instance", lp_instance, "TSPLIB file")->required();
    lp_cmd->add_option("--m", lp_m, "Number of salesmen")->required();
    lp_cmd->add_option("--out", lp_out, "Output path (default stdout)");
    lp_cmd->add_option("--metric", lp_metric, "Override the distance: real, rounded, ceil or att");

    int gen_n = 0;
    double gen_width = 1000.0;
    std::uint64_t gen_seed = 1;
    std::string gen_name, gen_out;
    auto *gen_cmd = app.add_subcommand("gen", "Generate a uniform random instance");
    gen_cmd->add_option("--n", gen_n, "Number of cities")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--width", gen_width, "Side of the square")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--name", gen_name, "NAME field");
    gen_cmd->add_option("--out", gen_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "mils: " << e.what() << "\nRun 'mils --help' for usage.\n";
        return kExitUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve, out);
        if (*bench_cmd) return cmd_bench(bench, out, err);
        if (*validate_cmd) return cmd_validate(check, out);
        if (*lp_cmd) return cmd_export_lp(lp_instance, lp_m, lp_metric, lp_out, out);
        if (*gen_cmd) return cmd_gen(gen_n, gen_width, gen_seed, gen_name, gen_out, out);
    } catch (const CommandError &e) {
        err << "mils: " << e.message << '\n';
        return e.code;
    } catch (const std::exception &e) {
        err << "mils: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace mils::cli
