#include "mils/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mils {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Held-Karp over every subset of `cities`: best[mask * k + j] is the shortest
// path leaving the depot, visiting `mask` and ending at cities[j].
struct HeldKarp {
    int k = 0;
    std::vector<double> best;
    std::vector<std::int8_t> parent;

    HeldKarp(const Instance &instance, const std::vector<int> &cities) : k(static_cast<int>(cities.size())) {
        const std::size_t full = std::size_t{1} << k;
        best.assign(full * static_cast<std::size_t>(k), kInf);
        parent.assign(full * static_cast<std::size_t>(k), -1);
        for (int j = 0; j < k; ++j)
            best[(std::size_t{1} << j) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] =
                instance.distance(kDepot, cities[static_cast<std::size_t>(j)]);
        for (std::size_t mask = 1; mask < full; ++mask) {
            for (int j = 0; j < k; ++j) {
                if (!(mask >> j & 1)) continue;
                const double here = best[mask * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)];
                if (here == kInf) continue;
                for (int nx = 0; nx < k; ++nx) {
                    if (mask >> nx & 1) continue;
                    const std::size_t next = mask | (std::size_t{1} << nx);
                    const double cand = here + instance.distance(cities[static_cast<std::size_t>(j)],
                                                                 cities[static_cast<std::size_t>(nx)]);
                    double &slot = best[next * static_cast<std::size_t>(k) + static_cast<std::size_t>(nx)];
                    if (cand < slot) {
                        slot = cand;
                        parent[next * static_cast<std::size_t>(k) + static_cast<std::size_t>(nx)] =
                            static_cast<std::int8_t>(j);
                    }
                }
            }
        }
    }

    // Closed tour length over `mask` and the last city achieving it.
    std::pair<double, int> close(const Instance &instance, const std::vector<int> &cities, std::size_t mask) const {
        double len = kInf;
        int last = -1;
        for (int j = 0; j < k; ++j) {
            if (!(mask >> j & 1)) continue;
            const double cand = best[mask * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] +
                                instance.distance(cities[static_cast<std::size_t>(j)], kDepot);
            if (cand < len) {
                len = cand;
                last = j;
            }
        }
        return {len, last};
    }

    Tour tour(const Instance &instance, const std::vector<int> &cities, std::size_t mask) const {
        Tour out;
        int j = close(instance, cities, mask).second;
        while (j >= 0) {
            out.push_back(cities[static_cast<std::size_t>(j)]);
            const int p = parent[mask * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)];
            mask &= ~(std::size_t{1} << j);
            j = p;
        }
        std::reverse(out.begin(), out.end());
        return out;
    }
};

}  // namespace

Tour held_karp_tour(const Instance &instance, const std::vector<int> &cities) {
    if (cities.size() > 16) throw std::invalid_argument("held_karp_tour supports at most 16 cities");
    if (cities.empty()) return {};
    const HeldKarp hk(instance, cities);
    return hk.tour(instance, cities, (std::size_t{1} << cities.size()) - 1);
}

ExactResult brute_force_opt(const Instance &instance, int m) {
    const int n = instance.num_cities();
    if (n > kExactMaxCities)
        throw std::invalid_argument("brute_force_opt refuses " + std::to_string(n) + " cities (limit " +
                                    std::to_string(kExactMaxCities) + ")");
    if (m < 1 || m > n) throw std::invalid_argument("brute_force_opt needs 1 <= m <= n");

    std::vector<int> cities(static_cast<std::size_t>(n));
    for (int c = 1; c <= n; ++c) cities[static_cast<std::size_t>(c - 1)] = c;
    const HeldKarp hk(instance, cities);
    const std::size_t full = std::size_t{1} << n;

    std::vector<double> tsp(full, kInf);
    for (std::size_t s = 1; s < full; ++s) tsp[s] = hk.close(instance, cities, s).first;

    // value[k - 1][S]: best makespan splitting S into k nonempty tours.
    std::vector<std::vector<double>> value(static_cast<std::size_t>(m), std::vector<double>(full, kInf));
    std::vector<std::vector<std::size_t>> choice(static_cast<std::size_t>(m), std::vector<std::size_t>(full, 0));
    value[0] = tsp;
    for (int k = 2; k <= m; ++k) {
        auto &cur = value[static_cast<std::size_t>(k - 1)];
        const auto &prev = value[static_cast<std::size_t>(k - 2)];
        auto &pick = choice[static_cast<std::size_t>(k - 1)];
        for (std::size_t s = 1; s < full; ++s) {
            const std::size_t low = s & (~s + 1);
            const std::size_t rest = s ^ low;
            // T always holds the lowest city of S, so each partition is seen once.
            for (std::size_t r = rest;; r = (r - 1) & rest) {
                const std::size_t t = low | r;
                if (t != s) {
                    const double cand = std::max(tsp[t], prev[s ^ t]);
                    if (cand < cur[s]) {
                        cur[s] = cand;
                        pick[s] = t;
                    }
                }
                if (r == 0) break;
            }
        }
    }

    ExactResult result;
    std::size_t s = full - 1;
    result.makespan = value[static_cast<std::size_t>(m - 1)][s];
    for (int k = m; k >= 2; --k) {
        const std::size_t t = choice[static_cast<std::size_t>(k - 1)][s];
        result.tours.push_back(hk.tour(instance, cities, t));
        s ^= t;
    }
    result.tours.push_back(hk.tour(instance, cities, s));
    return result;
}

namespace {

std::string xname(int i, int j, int k) {
    return "x_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

// Writes a linear expression, wrapping long rows.
class RowWriter {
public:
    explicit RowWriter(std::ostream &out) : out_(out) {}

    void term(double coef, const std::string &var) {
        if (terms_ > 0 && terms_ % 8 == 0) out_ << "\n   ";
        if (coef < 0) out_ << " - ";
        else if (terms_ > 0) out_ << " + ";
        else out_ << ' ';
        const double mag = std::abs(coef);
        if (mag != 1.0) out_ << format_double(mag) << ' ';
        out_ << var;
        ++terms_;
    }

private:
    std::ostream &out_;
    int terms_ = 0;
};

}  // namespace

void export_lp(std::ostream &out, const Instance &instance, int m) {
    const int nv = instance.num_vertices();
    const int n = instance.num_cities();
    if (m < 1 || m > n) throw std::invalid_argument("export_lp needs 1 <= m <= n");

    out << "\\ minmax mTSP flow model for " << instance.name() << ": " << n << " cities, " << m << " salesmen\n";
    out << "Minimize\n obj: C\nSubject To\n";

    for (int k = 1; k <= m; ++k) {
        out << " len_" << k << ':';
        RowWriter row(out);
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j)
                if (i != j) row.term(instance.distance(i, j), xname(i, j, k));
        row.term(-1.0, "C");
        out << " <= 0\n";
    }
    for (int j = 1; j <= n; ++j) {
        out << " assign_" << j << ':';
        RowWriter row(out);
        for (int k = 1; k <= m; ++k)
            for (int i = 0; i < nv; ++i)
                if (i != j) row.term(1.0, xname(i, j, k));
        out << " = 1\n";
    }
    for (int k = 1; k <= m; ++k) {
        out << " depot_out_" << k << ':';
        RowWriter row(out);
        for (int j = 1; j < nv; ++j) row.term(1.0, xname(0, j, k));
        out << " = 1\n";
    }
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= m; ++k) {
            out << " flow_" << j << '_' << k << ':';
            RowWriter row(out);
            for (int i = 0; i < nv; ++i)
                if (i != j) row.term(1.0, xname(i, j, k));
            for (int i = 0; i < nv; ++i)
                if (i != j) row.term(-1.0, xname(j, i, k));
            out << " = 0\n";
        }
    }
    for (int k = 1; k <= m; ++k) {
        out << " depot_in_" << k << ':';
        RowWriter row(out);
        for (int i = 1; i < nv; ++i) row.term(1.0, xname(i, 0, k));
        out << " = 1\n";
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            out << " mtz_" << i << '_' << j << ':';
            RowWriter row(out);
            row.term(1.0, "u_" + std::to_string(i));
            row.term(-1.0, "u_" + std::to_string(j));
            for (int k = 1; k <= m; ++k) row.term(static_cast<double>(nv), xname(i, j, k));
            out << " <= " << nv - 1 << '\n';
        }
    }

    out << "Bounds\n C >= 0\n";
    for (int i = 1; i <= n; ++i) out << " 1 <= u_" << i << " <= " << nv - 1 << '\n';
    out << "Binaries\n";
    int count = 0;
    for (int k = 1; k <= m; ++k)
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) {
                if (i == j) continue;
                out << ' ' << xname(i, j, k);
                if (++count % 8 == 0) out << '\n';
            }
    if (count % 8 != 0) out << '\n';
    out << "End\n";
}

std::string export_lp(const Instance &instance, int m) {
    std::ostringstream out;
    export_lp(out, instance, m);
    return out.str();
}

std::string_view to_string(ConstraintFamily family) {
    switch (family) {
        case ConstraintFamily::Length: return "length";
        case ConstraintFamily::Assignment: return "assignment";
        case ConstraintFamily::DepotOut: return "depot_out";
        case ConstraintFamily::Flow: return "flow";
        case ConstraintFamily::DepotIn: return "depot_in";
        case ConstraintFamily::Mtz: return "mtz";
        case ConstraintFamily::Binary: return "binary";
    }
    return "binary";
}

std::vector<ModelViolation> check_model_feasibility(const Instance &instance, int m, const std::vector<Tour> &tours,
                                                    std::optional<double> makespan) {
    const int nv = instance.num_vertices();
    const int n = instance.num_cities();
    const auto idx = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(i)) *
                   static_cast<std::size_t>(nv) +
               static_cast<std::size_t>(j);
    };
    std::vector<ModelViolation> out;
    std::vector<int> x(static_cast<std::size_t>(m) * static_cast<std::size_t>(nv) * static_cast<std::size_t>(nv), 0);
    std::vector<int> rank(static_cast<std::size_t>(nv), 0);

    const int mapped = std::min<int>(m, static_cast<int>(tours.size()));
    for (int k = 0; k < mapped; ++k) {
        const Tour &tour = tours[static_cast<std::size_t>(k)];
        int prev = kDepot;
        for (std::size_t p = 0; p < tour.size(); ++p) {
            const int c = tour[p];
            if (c < 1 || c > n) {
                out.push_back({ConstraintFamily::Assignment, "city " + std::to_string(c) + " is not a vertex"});
                return out;
            }
            ++x[idx(prev, c, k)];
            rank[static_cast<std::size_t>(c)] = static_cast<int>(p) + 1;
            prev = c;
        }
        if (!tour.empty()) ++x[idx(prev, kDepot, k)];
    }

    for (int k = 0; k < m; ++k)
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j)
                if (x[idx(i, j, k)] > 1 || (i == j && x[idx(i, j, k)] != 0))
                    out.push_back({ConstraintFamily::Binary, xname(i, j, k + 1) + " = " +
                                                                 std::to_string(x[idx(i, j, k)])});

    const double c_value = makespan.value_or(mils::makespan(instance, tours));
    for (int k = 0; k < m; ++k) {
        double len = 0.0;
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) len += instance.distance(i, j) * x[idx(i, j, k)];
        if (len > c_value + 1e-9)
            out.push_back({ConstraintFamily::Length, "salesman " + std::to_string(k + 1) + " travels " +
                                                         format_double(len) + " > C = " + format_double(c_value)});
    }
    for (int j = 1; j <= n; ++j) {
        int in = 0;
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < nv; ++i) in += x[idx(i, j, k)];
        if (in != 1)
            out.push_back({ConstraintFamily::Assignment,
                           "city " + std::to_string(j) + " entered " + std::to_string(in) + " times"});
    }
    for (int k = 0; k < m; ++k) {
        int leave = 0;
        int enter = 0;
        for (int j = 1; j < nv; ++j) {
            leave += x[idx(0, j, k)];
            enter += x[idx(j, 0, k)];
        }
        if (leave != 1)
            out.push_back({ConstraintFamily::DepotOut, "salesman " + std::to_string(k + 1) + " leaves the depot " +
                                                           std::to_string(leave) + " times"});
        if (enter != 1)
            out.push_back({ConstraintFamily::DepotIn, "salesman " + std::to_string(k + 1) + " enters the depot " +
                                                          std::to_string(enter) + " times"});
    }
    for (int j = 1; j <= n; ++j) {
        for (int k = 0; k < m; ++k) {
            int balance = 0;
            for (int i = 0; i < nv; ++i) balance += x[idx(i, j, k)] - x[idx(j, i, k)];
            if (balance != 0)
                out.push_back({ConstraintFamily::Flow, "flow imbalance at city " + std::to_string(j) +
                                                           " for salesman " + std::to_string(k + 1)});
        }
    }
    for (int i = 1; i <= n; ++i) {
        const int ui = rank[static_cast<std::size_t>(i)];
        if (ui < 1 || ui > nv - 1) {
            out.push_back({ConstraintFamily::Mtz, "rank of city " + std::to_string(i) + " out of bounds"});
            continue;
        }
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const int uj = rank[static_cast<std::size_t>(j)];
            int arcs = 0;
            for (int k = 0; k < m; ++k) arcs += x[idx(i, j, k)];
            if (uj >= 1 && ui - uj + nv * arcs > nv - 1)
                out.push_back({ConstraintFamily::Mtz,
                               "rank constraint violated on arc " + std::to_string(i) + "->" + std::to_string(j)});
        }
    }
    return out;
}

}  // namespace mils
