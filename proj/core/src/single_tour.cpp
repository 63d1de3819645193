#include "mils/single_tour.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace mils {

namespace {

class CycleImprover {
public:
    CycleImprover(const Instance &instance, const NeighborList &neighbors, const Tour &tour)
        : inst_(instance), nb_(neighbors), pos_(static_cast<std::size_t>(instance.num_vertices()), -1) {
        seq_.reserve(tour.size() + 1);
        seq_.push_back(kDepot);
        seq_.insert(seq_.end(), tour.begin(), tour.end());
        reindex();
    }

    Tour run() {
        while (two_opt_pass() || or_opt_pass()) {
        }
        return Tour(seq_.begin() + 1, seq_.end());
    }

private:
    int size() const { return static_cast<int>(seq_.size()); }
    int at(int i) const { return seq_[static_cast<std::size_t>((i % size() + size()) % size())]; }
    double d(int a, int b) const { return inst_.distance(a, b); }

    void reindex() {
        for (int i = 0; i < size(); ++i) pos_[static_cast<std::size_t>(seq_[static_cast<std::size_t>(i)])] = i;
    }

    // Replaces edges (p, p+1) and (q, q+1) by (p, q) and (p+1, q+1).
    bool try_two_opt(int p, int q) {
        const int n = size();
        p = (p % n + n) % n;
        q = (q % n + n) % n;
        if (p > q) std::swap(p, q);
        if (q - p < 2 || (p == 0 && q == n - 1)) return false;
        const int a = at(p), an = at(p + 1), b = at(q), bn = at(q + 1);
        const double gain = d(a, an) + d(b, bn) - d(a, b) - d(an, bn);
        if (gain <= kImproveEps) return false;
        std::reverse(seq_.begin() + p + 1, seq_.begin() + q + 1);
        for (int i = p + 1; i <= q; ++i) pos_[static_cast<std::size_t>(seq_[static_cast<std::size_t>(i)])] = i;
        return true;
    }

    bool two_opt_pass() {
        bool any = false;
        for (int i = 0; i < size(); ++i) {
            const int a = seq_[static_cast<std::size_t>(i)];
            for (int b : nb_.of(a)) {
                const int j = pos_[static_cast<std::size_t>(b)];
                if (j < 0 || !member(b)) continue;
                if (try_two_opt(i, j) || try_two_opt(i - 1, j - 1)) {
                    any = true;
                    break;
                }
            }
        }
        return any;
    }

    bool member(int v) const {
        const int j = pos_[static_cast<std::size_t>(v)];
        return j >= 0 && j < size() && seq_[static_cast<std::size_t>(j)] == v;
    }

    bool or_opt_pass() {
        for (int len = 1; len <= 3; ++len) {
            for (int i = 1; i + len - 1 <= size() - 1; ++i) {
                if (try_or_opt(i, len)) return true;
            }
        }
        return false;
    }

    bool try_or_opt(int i, int len) {
        const int last = i + len - 1;
        const int p = at(i - 1), s1 = at(i), sl = at(last), nx = at(last + 1);
        if (size() - len < 2) return false;
        const double removal = d(p, s1) + d(sl, nx) - d(p, nx);
        if (removal <= kImproveEps) return false;
        auto inside = [&](int v) {
            const int j = pos_[static_cast<std::size_t>(v)];
            return j >= i && j <= last;
        };
        for (int end : {s1, sl}) {
            for (int c : nb_.of(end)) {
                if (!member(c) || inside(c)) continue;
                const int jc = pos_[static_cast<std::size_t>(c)];
                for (int e = 0; e < 2; ++e) {
                    const int e1 = e == 0 ? c : at(jc - 1);
                    const int e2 = e == 0 ? at(jc + 1) : c;
                    if (inside(e1) || inside(e2)) continue;
                    const double forward = d(e1, s1) + d(sl, e2) - d(e1, e2);
                    const double backward = d(e1, sl) + d(s1, e2) - d(e1, e2);
                    const bool reversed = backward < forward;
                    if (removal - std::min(forward, backward) <= kImproveEps) continue;
                    move_segment(i, len, e1, reversed);
                    return true;
                }
            }
        }
        return false;
    }

    void move_segment(int i, int len, int after, bool reversed) {
        std::vector<int> segment(seq_.begin() + i, seq_.begin() + i + len);
        if (reversed) std::reverse(segment.begin(), segment.end());
        seq_.erase(seq_.begin() + i, seq_.begin() + i + len);
        const auto where = std::find(seq_.begin(), seq_.end(), after) + 1;
        seq_.insert(where, segment.begin(), segment.end());
        reindex();
    }

    const Instance &inst_;
    const NeighborList &nb_;
    std::vector<int> seq_;
    std::vector<int> pos_;
};

std::atomic<unsigned long> temp_counter{0};

std::filesystem::path temp_path(const std::string &suffix) {
    const auto id = temp_counter.fetch_add(1);
    return std::filesystem::temp_directory_path() /
           ("mils-" + std::to_string(::getpid()) + "-" + std::to_string(id) + suffix);
}

}  // namespace

Tour two_opt_or_opt(const Instance &instance, const NeighborList &neighbors, const Tour &tour) {
    if (tour.size() < 3) return tour;
    return CycleImprover(instance, neighbors, tour).run();
}

bool run_external_tour_solver(const Instance &instance, const Tour &tour, const std::string &command, int timeout_ms,
                              Tour &result, std::string &error) {
    std::vector<Point> points;
    points.push_back(instance.coord(kDepot));
    for (int c : tour) points.push_back(instance.coord(c));
    const Instance sub("subtour", std::move(points), instance.metric());

    const auto in_path = temp_path(".tsp");
    const auto out_path = temp_path(".tour");
    struct Cleanup {
        std::filesystem::path a, b;
        ~Cleanup() {
            std::error_code ec;
            std::filesystem::remove(a, ec);
            std::filesystem::remove(b, ec);
        }
    } cleanup{in_path, out_path};
    {
        std::ofstream out(in_path);
        write_tsplib(out, sub);
        if (!out) {
            error = "cannot write " + in_path.string();
            return false;
        }
    }

    const std::string script = command + " \"$1\" \"$2\"";
    const pid_t pid = ::fork();
    if (pid < 0) {
        error = "fork failed";
        return false;
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::execl("/bin/sh", "sh", "-c", script.c_str(), "sh", in_path.c_str(), out_path.c_str(),
                static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    int status = 0;
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) {
            error = "waitpid failed";
            return false;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            error = "external tour solver timed out after " + std::to_string(timeout_ms) + " ms";
            return false;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        error = "external tour solver failed with status " + std::to_string(status);
        return false;
    }

    std::ifstream in(out_path);
    std::vector<int> nodes;
    int id = 0;
    while (in >> id && id != -1) nodes.push_back(id);
    const int k = static_cast<int>(tour.size());
    if (nodes.size() != tour.size() + 1) {
        error = "external tour has " + std::to_string(nodes.size()) + " nodes, expected " + std::to_string(k + 1);
        return false;
    }
    std::vector<char> seen(static_cast<std::size_t>(k) + 2, 0);
    for (int node : nodes) {
        if (node < 1 || node > k + 1 || seen[static_cast<std::size_t>(node)]) {
            error = "external tour is not a permutation";
            return false;
        }
        seen[static_cast<std::size_t>(node)] = 1;
    }
    const auto depot_at = std::find(nodes.begin(), nodes.end(), 1);
    std::rotate(nodes.begin(), depot_at, nodes.end());
    result.clear();
    for (std::size_t i = 1; i < nodes.size(); ++i) result.push_back(tour[static_cast<std::size_t>(nodes[i] - 2)]);
    return true;
}

Tour improve_tour(const Instance &instance, const NeighborList &neighbors, const Tour &tour,
                  const TourImprover &improver) {
    if (tour.size() < 3) return tour;
    Tour candidate;
    bool have = false;
    if (improver.kind == TourImproverKind::External) {
        std::string error;
        have = run_external_tour_solver(instance, tour, improver.command, improver.timeout_ms, candidate, error);
        if (!have) std::clog << "mils: " << error << "; using the builtin tour improver\n";
    }
    if (!have) candidate = two_opt_or_opt(instance, neighbors, tour);
    return tour_length(instance, candidate) < tour_length(instance, tour) - kImproveEps ? candidate : tour;
}

LocalSearchStats single_tour_improve(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                                     const TourImprover &improver, MoveFrequency *frequency,
                                     LocalSearchOptions options) {
    for (int t = 0; t < solution.num_tours(); ++t) {
        Tour better = improve_tour(instance, neighbors, solution.tour(t), improver);
        if (better != solution.tour(t)) solution.replace_tour(instance, t, std::move(better));
    }
    return local_search(instance, neighbors, solution, frequency, options);
}

}  // namespace mils
