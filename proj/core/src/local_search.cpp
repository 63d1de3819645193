#include "mils/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mils {

std::string_view to_string(MoveKind kind) {
    static constexpr std::string_view names[] = {"M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"};
    return names[static_cast<int>(kind)];
}

namespace {

class Planner {
public:
    Planner(TourPlan &plan, int tour) : plan_(plan) {
        plan_.tour = tour;
        plan_.count = 0;
    }

    void add(int tour, int a, int b, bool reversed = false) {
        if (a <= b) plan_.segments[static_cast<std::size_t>(plan_.count++)] = {tour, a, b, reversed};
    }

    bool empty() const { return plan_.count == 0; }

private:
    TourPlan &plan_;
};

double plan_length(const Instance &instance, const Solution &solution, const TourPlan &plan) {
    double len = 0.0;
    int prev = kDepot;
    for (int i = 0; i < plan.count; ++i) {
        const Segment &s = plan.segments[static_cast<std::size_t>(i)];
        const int first = solution.at(s.tour, s.reversed ? s.b : s.a);
        const int last = solution.at(s.tour, s.reversed ? s.a : s.b);
        len += instance.distance(prev, first) + solution.prefix(s.tour, s.b) - solution.prefix(s.tour, s.a);
        prev = last;
    }
    return len + instance.distance(prev, kDepot);
}

struct Block {
    int start;
    int end;
};

// Block moved to just after extended position q of tour `to`.
bool plan_relocation(const Solution &sol, Move &mv, Block blk, int to, int q, bool reversed) {
    const int from = mv.tu;
    if (from == to) {
        if (q >= blk.start && q < blk.end) return false;
        const int len = sol.tour_size(from);
        Planner p(mv.plans[0], from);
        if (q < blk.start) {
            p.add(from, 1, q);
            p.add(from, blk.start, blk.end, reversed);
            p.add(from, q + 1, blk.start - 1);
            p.add(from, blk.end + 1, len);
        } else {
            p.add(from, 1, blk.start - 1);
            p.add(from, blk.end + 1, q);
            p.add(from, blk.start, blk.end, reversed);
            p.add(from, q + 1, len);
        }
        mv.num_plans = 1;
        return true;
    }
    const int len_from = sol.tour_size(from);
    if (len_from - (blk.end - blk.start + 1) < 1) return false;
    Planner pf(mv.plans[0], from);
    pf.add(from, 1, blk.start - 1);
    pf.add(from, blk.end + 1, len_from);
    Planner pt(mv.plans[1], to);
    pt.add(to, 1, q);
    pt.add(from, blk.start, blk.end, reversed);
    pt.add(to, q + 1, sol.tour_size(to));
    mv.num_plans = 2;
    return true;
}

// Block a (in tu) takes b's place and vice versa.
bool plan_swap(const Solution &sol, Move &mv, Block a, bool rev_a, Block b, bool rev_b) {
    const int tu = mv.tu;
    const int tv = mv.tv;
    if (tu == tv) {
        if (!(a.end < b.start || b.end < a.start)) return false;
        const int len = sol.tour_size(tu);
        Planner p(mv.plans[0], tu);
        if (a.start < b.start) {
            p.add(tu, 1, a.start - 1);
            p.add(tu, b.start, b.end, rev_b);
            p.add(tu, a.end + 1, b.start - 1);
            p.add(tu, a.start, a.end, rev_a);
            p.add(tu, b.end + 1, len);
        } else {
            p.add(tu, 1, b.start - 1);
            p.add(tu, a.start, a.end, rev_a);
            p.add(tu, b.end + 1, a.start - 1);
            p.add(tu, b.start, b.end, rev_b);
            p.add(tu, a.end + 1, len);
        }
        mv.num_plans = 1;
        return true;
    }
    Planner pu(mv.plans[0], tu);
    pu.add(tu, 1, a.start - 1);
    pu.add(tv, b.start, b.end, rev_b);
    pu.add(tu, a.end + 1, sol.tour_size(tu));
    Planner pv(mv.plans[1], tv);
    pv.add(tv, 1, b.start - 1);
    pv.add(tu, a.start, a.end, rev_a);
    pv.add(tv, b.end + 1, sol.tour_size(tv));
    mv.num_plans = 2;
    return true;
}

bool plan_two_opt(const Solution &sol, Move &mv) {
    if (mv.tu != mv.tv || std::abs(mv.pu - mv.pv) < 2) return false;
    const int i = std::min(mv.pu, mv.pv);
    const int j = std::max(mv.pu, mv.pv);
    Planner p(mv.plans[0], mv.tu);
    p.add(mv.tu, 1, i);
    p.add(mv.tu, i + 1, j, true);
    p.add(mv.tu, j + 1, sol.tour_size(mv.tu));
    mv.num_plans = 1;
    return true;
}

bool plan_two_opt_star(const Solution &sol, Move &mv, bool reversed) {
    const int tu = mv.tu;
    const int tv = mv.tv;
    if (tu == tv) return false;
    const int lu = sol.tour_size(tu);
    const int lv = sol.tour_size(tv);
    Planner a(mv.plans[0], tu);
    Planner b(mv.plans[1], tv);
    if (!reversed) {
        a.add(tu, 1, mv.pu);
        a.add(tv, mv.pv + 1, lv);
        b.add(tv, 1, mv.pv);
        b.add(tu, mv.pu + 1, lu);
    } else {
        a.add(tu, 1, mv.pu);
        a.add(tv, 1, mv.pv, true);
        b.add(tu, mv.pu + 1, lu, true);
        b.add(tv, mv.pv + 1, lv);
    }
    if (a.empty() || b.empty()) return false;
    mv.num_plans = 2;
    return true;
}

}  // namespace

std::optional<Move> evaluate_move(const Instance &instance, const Solution &solution, MoveKind kind, int u, int v,
                                  int tv) {
    if (u <= 0 || u == v || solution.tour_of(u) < 0) return std::nullopt;
    Move mv;
    mv.kind = kind;
    mv.u = u;
    mv.v = v;
    mv.tu = solution.tour_of(u);
    mv.pu = solution.position_of(u) + 1;
    mv.size_u = solution.tour_size(mv.tu);
    mv.x = solution.at(mv.tu, mv.pu + 1);
    if (v == kDepot) {
        if (tv < 0 || tv >= solution.num_tours()) return std::nullopt;
        mv.tv = tv;
        mv.pv = 0;
    } else {
        if (solution.tour_of(v) < 0) return std::nullopt;
        mv.tv = solution.tour_of(v);
        mv.pv = solution.position_of(v) + 1;
    }
    mv.size_v = solution.tour_size(mv.tv);
    mv.y = solution.at(mv.tv, mv.pv + 1);

    const bool x_city = mv.x != kDepot;
    const bool y_city = mv.y != kDepot;
    const bool v_city = v != kDepot;
    const Block bu{mv.pu, mv.pu};
    const Block bux{mv.pu, mv.pu + 1};

    bool ok = false;
    switch (kind) {
        case MoveKind::M1: ok = plan_relocation(solution, mv, bu, mv.tv, mv.pv, false); break;
        case MoveKind::M2:
            ok = x_city && v != mv.x && plan_relocation(solution, mv, bux, mv.tv, mv.pv, false);
            break;
        case MoveKind::M3: {
            if (!x_city || v == mv.x) break;
            const int q = v_city ? mv.pv - 1 : mv.size_v;
            ok = plan_relocation(solution, mv, bux, mv.tv, q, true);
            break;
        }
        case MoveKind::M4:
            ok = x_city && v_city && v != mv.x &&
                 plan_swap(solution, mv, Block{mv.pu + 1, mv.pu + 1}, false, Block{mv.pv, mv.pv}, false);
            break;
        case MoveKind::M5:
            ok = x_city && v_city && plan_swap(solution, mv, bux, false, Block{mv.pv, mv.pv}, false);
            break;
        case MoveKind::M6:
            ok = x_city && v_city && y_city &&
                 plan_swap(solution, mv, bux, false, Block{mv.pv, mv.pv + 1}, false);
            break;
        case MoveKind::M7:
            ok = x_city && v_city && y_city &&
                 plan_swap(solution, mv, bux, true, Block{mv.pv, mv.pv + 1}, false);
            break;
        case MoveKind::M8: ok = plan_two_opt(solution, mv); break;
        case MoveKind::M9: ok = plan_two_opt_star(solution, mv, false); break;
        case MoveKind::M10: ok = plan_two_opt_star(solution, mv, true); break;
    }
    if (!ok) return std::nullopt;

    double old_max = 0.0;
    double old_sum = 0.0;
    double new_max = 0.0;
    double new_sum = 0.0;
    for (int i = 0; i < mv.num_plans; ++i) {
        TourPlan &plan = mv.plans[static_cast<std::size_t>(i)];
        if (plan.count == 0) return std::nullopt;
        plan.new_length = plan_length(instance, solution, plan);
        const double before = solution.tour_length(plan.tour);
        old_max = std::max(old_max, before);
        old_sum += before;
        new_max = std::max(new_max, plan.new_length);
        new_sum += plan.new_length;
    }
    mv.delta_metric = new_max - old_max;
    mv.delta_total = new_sum - old_sum;
    return mv;
}

namespace {

bool is_stale(const Solution &solution, const Move &mv) {
    if (solution.tour_of(mv.u) != mv.tu || solution.position_of(mv.u) + 1 != mv.pu) return true;
    if (mv.tv < 0 || mv.tv >= solution.num_tours()) return true;
    if (solution.tour_size(mv.tu) != mv.size_u || solution.tour_size(mv.tv) != mv.size_v) return true;
    if (mv.v != kDepot && (solution.tour_of(mv.v) != mv.tv || solution.position_of(mv.v) + 1 != mv.pv))
        return true;
    return solution.at(mv.tu, mv.pu + 1) != mv.x || solution.at(mv.tv, mv.pv + 1) != mv.y;
}

Tour materialize(const Solution &solution, const TourPlan &plan) {
    Tour out;
    for (int i = 0; i < plan.count; ++i) {
        const Segment &s = plan.segments[static_cast<std::size_t>(i)];
        if (s.reversed) {
            for (int e = s.b; e >= s.a; --e) out.push_back(solution.at(s.tour, e));
        } else {
            for (int e = s.a; e <= s.b; ++e) out.push_back(solution.at(s.tour, e));
        }
    }
    return out;
}

}  // namespace

void apply_move(const Instance &instance, Solution &solution, const Move &move) {
    if (is_stale(solution, move)) throw std::logic_error("apply_move: stale move");
    std::array<Tour, 2> built;
    for (int i = 0; i < move.num_plans; ++i)
        built[static_cast<std::size_t>(i)] = materialize(solution, move.plans[static_cast<std::size_t>(i)]);
    for (int i = 0; i < move.num_plans; ++i)
        solution.replace_tour(instance, move.plans[static_cast<std::size_t>(i)].tour,
                              std::move(built[static_cast<std::size_t>(i)]));
}

std::vector<int> touched_cities(const Solution &before, const Move &move) {
    std::vector<int> out;
    auto push = [&](int vertex) {
        if (vertex != kDepot) out.push_back(vertex);
    };
    push(move.u);
    push(move.v);
    push(move.x);
    push(move.y);
    for (int i = 0; i < move.num_plans; ++i) {
        const TourPlan &plan = move.plans[static_cast<std::size_t>(i)];
        for (int k = 0; k < plan.count; ++k) {
            const Segment &s = plan.segments[static_cast<std::size_t>(k)];
            push(before.at(s.tour, s.a - 1));
            push(before.at(s.tour, s.a));
            push(before.at(s.tour, s.b));
            push(before.at(s.tour, s.b + 1));
        }
    }
    return out;
}

LocalSearch::LocalSearch(const Instance &instance, const NeighborList &neighbors, LocalSearchOptions options)
    : instance_(instance), neighbors_(neighbors), options_(options) {}

namespace {

bool better(const Move &a, const Move &b) {
    constexpr double tie = 1e-12;
    if (a.delta_metric < b.delta_metric - tie) return true;
    if (a.delta_metric > b.delta_metric + tie) return false;
    if (a.delta_total < b.delta_total - tie) return true;
    if (a.delta_total > b.delta_total + tie) return false;
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.tv < b.tv;
}

}  // namespace

void LocalSearch::consider(const Solution &solution, MoveKind kind, int u, int v, int tv, std::optional<Move> &best,
                           bool &found, long &evaluations) const {
    ++evaluations;
    auto mv = evaluate_move(instance_, solution, kind, u, v, tv);
    if (!mv || !mv->improving()) return;
    found = true;
    if (!best || better(*mv, *best)) best = *mv;
}

std::optional<Move> LocalSearch::scan(const Solution &solution, MoveKind kind, bool &skipped, long &evaluations) {
    const int k = static_cast<int>(kind);
    const auto bit = static_cast<std::uint16_t>(1u << k);
    const bool first = options_.strategy == ImprovementStrategy::First;
    const bool inter_only = kind == MoveKind::M9 || kind == MoveKind::M10;
    const bool city_only = kind >= MoveKind::M4 && kind <= MoveKind::M7;
    std::optional<Move> best;

    for (int u = 1; u <= instance_.num_cities(); ++u) {
        if (options_.dont_look_bits && (clean_[static_cast<std::size_t>(u)] & bit)) {
            skipped = true;
            continue;
        }
        bool found = false;
        const int tu = solution.tour_of(u);
        for (int v : neighbors_.of(u)) {
            if (v != kDepot) {
                consider(solution, kind, u, v, -1, best, found, evaluations);
            } else if (!city_only) {
                if (kind == MoveKind::M8) {
                    consider(solution, kind, u, v, tu, best, found, evaluations);
                } else {
                    for (int t = 0; t < solution.num_tours(); ++t) {
                        if (inter_only && t == tu) continue;
                        consider(solution, kind, u, v, t, best, found, evaluations);
                    }
                }
            }
            if (first && found) return best;
        }
        if (!found) clean_[static_cast<std::size_t>(u)] |= bit;
    }
    return best;
}

LocalSearchStats LocalSearch::run(Solution &solution, MoveFrequency *frequency) {
    LocalSearchStats stats;
    clean_.assign(static_cast<std::size_t>(instance_.num_vertices()), 0);
    for (;;) {
        bool improved = false;
        bool skipped = false;
        for (int k = 0; k < kNumMoveKinds; ++k) {
            auto mv = scan(solution, static_cast<MoveKind>(k), skipped, stats.evaluations);
            if (!mv) continue;
            const auto touched = touched_cities(solution, *mv);
            apply_move(instance_, solution, *mv);
            for (int c : touched) clean_[static_cast<std::size_t>(c)] = 0;
            if (frequency) {
                frequency->record(mv->u);
                frequency->record(mv->v);
            }
            ++stats.moves;
            ++stats.moves_by_kind[static_cast<std::size_t>(k)];
            improved = true;
            break;
        }
        if (improved) continue;
        if (!skipped) break;
        // Tour lengths elsewhere may have changed the verdict for skipped cities; confirm with a clean pass.
        std::fill(clean_.begin(), clean_.end(), 0);
    }
    return stats;
}

LocalSearchStats local_search(const Instance &instance, const NeighborList &neighbors, Solution &solution,
                              MoveFrequency *frequency, LocalSearchOptions options) {
    LocalSearch ls(instance, neighbors, options);
    return ls.run(solution, frequency);
}

}  // namespace mils
