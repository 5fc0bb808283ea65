#pragma once

#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "oasp/aisle_graph.hpp"

// Route solvers. One exact dynamic program (optsa) plus four constructive
// heuristics (gdyme, gdymc, apxmre, apxmrc) and an exhaustive baseline for
// cross-checking on tiny instances. All of them take the budget as an edge
// count; odd budgets are rounded down (costs are always even).

namespace oasp {

enum class Algorithm { optsa, gdyme, gdymc, apxmre, apxmrc, brute_force };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::optsa: return "optsa";
        case Algorithm::gdyme: return "gdyme";
        case Algorithm::gdymc: return "gdymc";
        case Algorithm::apxmre: return "apxmre";
        case Algorithm::apxmrc: return "apxmrc";
        case Algorithm::brute_force: return "brute";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "optsa") return Algorithm::optsa;
    if (name == "gdyme") return Algorithm::gdyme;
    if (name == "gdymc") return Algorithm::gdymc;
    if (name == "apxmre") return Algorithm::apxmre;
    if (name == "apxmrc") return Algorithm::apxmrc;
    if (name == "brute") return Algorithm::brute_force;
    return std::nullopt;
}

struct SolverResult {
    Algorithm algorithm = Algorithm::optsa;
    RouteSolution solution;
    // For the ratio solvers: the best single-vertex route, kept so callers can
    // see which side of the max() won.
    std::optional<RouteSolution> best_single;
    double runtime_ms = 0.0;
};

// Worst-case guarantee of the ratio solvers: (1 - 1/e) / 2 of the optimum.
inline double apx_guarantee() { return 0.5 * (1.0 - std::exp(-1.0)); }

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline int even_budget(int budget) {
    if (budget < 0)
        throw std::invalid_argument("budget must be non-negative, got " + std::to_string(budget));
    return budget - (budget % 2);
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Route grown one prefix at a time; keeps depths, i_max, cost and reward
// consistent so the greedy solvers share one bookkeeping path.
class GrowingRoute {
public:
    GrowingRoute(const AisleGraph& g, const CumulativeTable& t) : g_(g), t_(t) {
        sol_.depths.assign(g.rows(), 0);
    }

    const RouteSolution& solution() const { return sol_; }
    int cost() const { return sol_.cost; }
    int marginal(int i, int j) const { return marginal_cost(g_, sol_, i, j); }

    // Extends the route to visit (i,j) and with it the whole row prefix.
    void add(int i, int j) {
        int mc = marginal(i, j);
        if (i > sol_.i_max) {
            for (int k = sol_.i_max + 1; k <= i; ++k) sol_.depths[k - 1] = 1;
            sol_.i_max = i;
        }
        int p = sol_.depths[i - 1];
        if (j > p) {
            sol_.reward += t_.prefix(i, j) - t_.prefix(i, p);
            sol_.depths[i - 1] = j;
        }
        sol_.cost += mc;
        assert(sol_.cost == route_cost(g_, sol_.depths));
    }

private:
    const AisleGraph& g_;
    const CumulativeTable& t_;
    RouteSolution sol_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact solver: row-by-row dynamic program over half-budget units.
// ---------------------------------------------------------------------------

// reward_at(i,b) is the best reward of a route that enters exactly rows 1..i
// using at most b downward budget units (one unit per vertical step into a
// row, one per column of depth beyond the first; the way back is the mirror
// image, hence budget/2). depth_at(i,b) is the depth chosen for row i in that
// best route, 0 where no route exists (b < i-1).
struct DpTables {
    int rows = 0;
    int half_budget = 0;

    double reward_at(int i, int b) const { return reward_[index(i, b)]; }
    int depth_at(int i, int b) const { return depth_[index(i, b)]; }

    double optimum() const { return reward_at(optimum_row(), half_budget); }

    int optimum_row() const {
        int best = 1;
        for (int i = 2; i <= rows; ++i)
            if (reward_at(i, half_budget) > reward_at(best, half_budget)) best = i;
        return best;
    }

    // filled by solve_optsa
    std::vector<double> reward_;
    std::vector<int> depth_;

private:
    size_t index(int i, int b) const {
        if (i < 1 || i > rows || b < 0 || b > half_budget)
            throw std::out_of_range("table cell (" + std::to_string(i) + "," + std::to_string(b) +
                                    ") out of range");
        return static_cast<size_t>(i - 1) * (half_budget + 1) + b;
    }
};

struct OptsaOutput {
    SolverResult result;
    DpTables tables;
};

inline OptsaOutput solve_optsa(const AisleGraph& g, int budget) {
    detail::Timer timer;
    int b_even = detail::even_budget(budget);
    int bmax = b_even / 2;
    int m = g.rows(), n = g.cols();
    CumulativeTable t(g);

    DpTables dp;
    dp.rows = m;
    dp.half_budget = bmax;
    dp.reward_.assign(static_cast<size_t>(m) * (bmax + 1), detail::kNegInf);
    dp.depth_.assign(static_cast<size_t>(m) * (bmax + 1), 0);
    auto set = [&](int i, int b, double r, int j) {
        dp.reward_[static_cast<size_t>(i - 1) * (bmax + 1) + b] = r;
        dp.depth_[static_cast<size_t>(i - 1) * (bmax + 1) + b] = j;
    };

    // Row 1 needs no vertical step, so b units buy the prefix up to column
    // b+1 (capped at n). Ties keep the smaller depth.
    {
        int arg = 1;
        for (int b = 0; b <= bmax; ++b) {
            int j = std::min(b + 1, n);
            if (t.prefix(1, j) > t.prefix(1, arg)) arg = j;
            set(1, b, t.prefix(1, arg), arg);
        }
    }

    // Entering row i at depth j consumes j units (1 vertical + j-1 across),
    // so j can reach b-i+2 before the rows above run dry; the cap at n rather
    // than n-1 is what makes full-depth rows reachable. Cells with b < i-1
    // stay at -inf: not enough budget to even reach row i.
    for (int i = 2; i <= m; ++i) {
        for (int b = i - 1; b <= bmax; ++b) {
            int j_cap = std::min(b - i + 2, n);
            double best = detail::kNegInf;
            int best_j = 0;
            for (int j = 1; j <= j_cap; ++j) {
                double cand = dp.reward_at(i - 1, b - j) + t.prefix(i, j);
                if (cand > best) {  // strict: ties keep the smaller depth
                    best = cand;
                    best_j = j;
                }
            }
            set(i, b, best, best_j);
        }
    }

    // Backtrack from the best final row (smallest on ties) in O(m).
    int best_i = dp.optimum_row();
    double opt = dp.reward_at(best_i, bmax);
    std::vector<int> depths(m, 0);
    if (opt > 0.0) {
        int b = bmax;
        for (int i = best_i; i >= 2; --i) {
            depths[i - 1] = dp.depth_at(i, b);
            b -= depths[i - 1];
        }
        depths[0] = dp.depth_at(1, b);
    }

    OptsaOutput out;
    out.result.algorithm = Algorithm::optsa;
    out.result.solution = make_route_solution(g, depths);
    out.result.solution.reward = opt;  // table value; recomputation agrees within fp noise
    if (out.result.solution.cost > b_even)
        throw std::logic_error("optsa backtrack produced an infeasible route");
    out.tables = std::move(dp);
    out.result.runtime_ms = timer.ms();
    return out;
}

// ---------------------------------------------------------------------------
// Greedy by element: globally highest-reward vertex first.
// ---------------------------------------------------------------------------

inline SolverResult solve_gdyme(const AisleGraph& g, int budget) {
    detail::Timer timer;
    int b = detail::even_budget(budget);
    int m = g.rows(), n = g.cols();
    CumulativeTable t(g);

    // Rewards never re-key, so a sorted pass is the extraction order.
    struct Entry {
        double reward;
        int i, j;
    };
    std::vector<Entry> order;
    order.reserve(static_cast<size_t>(m) * n);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) order.push_back({g.reward(i, j), i, j});
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b2) {
        if (a.reward != b2.reward) return a.reward > b2.reward;
        if (a.i != b2.i) return a.i < b2.i;
        return a.j < b2.j;
    });

    std::vector<char> visited(static_cast<size_t>(m) * n, 0);
    detail::GrowingRoute route(g, t);
    for (const Entry& e : order) {
        if (visited[static_cast<size_t>(e.i - 1) * n + (e.j - 1)]) continue;
        int mc = route.marginal(e.i, e.j);
        if (route.cost() + mc <= b) {
            route.add(e.i, e.j);
            for (int k = 1; k <= e.j; ++k) visited[static_cast<size_t>(e.i - 1) * n + (k - 1)] = 1;
        }
        // An unaffordable vertex stays unaffordable: the marginal cost of a
        // fixed vertex only grows as the route grows. Dropped for good.
    }

    SolverResult result;
    result.algorithm = Algorithm::gdyme;
    result.solution = route.solution();
    result.runtime_ms = timer.ms();
    return result;
}

// ---------------------------------------------------------------------------
// Greedy by row: one candidate per row, keyed by the cumulative prefix
// reward, retreating one column on every rejection.
// ---------------------------------------------------------------------------

inline SolverResult solve_gdymc(const AisleGraph& g, int budget) {
    detail::Timer timer;
    int b = detail::even_budget(budget);
    CumulativeTable t(g);
    detail::GrowingRoute route(g, t);

    struct Cand {
        double key;
        int i, j;
    };
    auto worse = [](const Cand& a, const Cand& c) {
        if (a.key != c.key) return a.key < c.key;
        return a.i > c.i;  // equal keys resolve to the smaller row
    };
    std::priority_queue<Cand, std::vector<Cand>, decltype(worse)> heap(worse);
    if (g.cols() >= 2)
        for (int i = 1; i <= g.rows(); ++i) heap.push({t.row_total(i), i, g.cols()});

    while (!heap.empty()) {
        Cand c = heap.top();
        heap.pop();
        int mc = route.marginal(c.i, c.j);
        if (route.cost() + mc <= b) {
            // Accepting the prefix retires the row: everything to the right
            // was already rejected against a smaller route.
            route.add(c.i, c.j);
        } else if (c.j - 1 >= 2) {
            heap.push({t.prefix(c.i, c.j - 1), c.i, c.j - 1});
        }
        // A candidate back at column 1 would collect nothing: row retires.
    }

    SolverResult result;
    result.algorithm = Algorithm::gdymc;
    result.solution = route.solution();
    result.runtime_ms = timer.ms();
    return result;
}

// ---------------------------------------------------------------------------
// Ratio greedy: best reward-to-marginal-cost next, with the single-best
// vertex kept as a fallback. Two flavours differing only in the numerator.
// ---------------------------------------------------------------------------

// Candidate pool for the ratio solvers. Conceptually this is a table of
// ratios h[i,d][j] = numerator / (2(j-1) + 2d) for every vertical offset d;
// only the offset the route currently induces per row is ever consulted, so
// one heap per row is kept live and rebuilt when the route moves under it.
// Discards are permanent: a vertex popped as unaffordable never re-enters,
// no matter how the denominators shrink later.
class RatioIndex {
public:
    enum class Numerator { element, cumulative };

    RatioIndex(const AisleGraph& g, const CumulativeTable& t, Numerator kind)
        : g_(g),
          t_(t),
          kind_(kind),
          m_(g.rows()),
          n_(g.cols()),
          dead_(static_cast<size_t>(m_) * n_, 0),
          discarded_(static_cast<size_t>(m_) * n_, 0),
          heaps_(m_) {}

    // Plain table entry: (i,j) read from a route whose deepest row is d rows
    // above i, row i untouched. Undefined at (i,1) with d=0: that vertex is
    // the already-standing interconnect, reachable at no cost.
    double ratio(int i, int d, int j) const {
        g_.check_vertex(i, j);
        if (d < 0 || d >= i)
            throw std::out_of_range("offset " + std::to_string(d) + " out of range for row " +
                                    std::to_string(i));
        int denom = 2 * (j - 1) + 2 * d;
        if (denom == 0) return detail::kNegInf;
        double numer = kind_ == Numerator::element ? g_.reward(i, j) : t_.prefix(i, j);
        return numer / denom;
    }

    // Entry for a row whose prefix is already visited through column p.
    double prefix_ratio(int i, int p, int j) const {
        g_.check_vertex(i, j);
        if (p < 1 || j <= p)
            throw std::out_of_range("prefix ratio needs 1 <= p < j, got p=" + std::to_string(p) +
                                    " j=" + std::to_string(j));
        double numer =
            kind_ == Numerator::element ? g_.reward(i, j) : t_.prefix(i, j) - t_.prefix(i, p);
        return numer / (2 * (j - p));
    }

    bool is_discarded(int i, int j) const { return discarded_[vid(i, j)] != 0; }
    void mark_visited(int i, int j) { dead_[vid(i, j)] = 1; }

    // Rebuilds row i's live heap for a route that has explored it through p.
    void rebuild_entered(int i, int p) {
        auto& h = heaps_[i - 1];
        h.clear();
        for (int j = p + 1; j <= n_; ++j)
            if (!dead_[vid(i, j)]) h.push_back({prefix_ratio(i, p, j), j});
        std::make_heap(h.begin(), h.end(), heap_less);
    }

    // Rebuilds row i's live heap for a route turning around d rows above it.
    void rebuild_below(int i, int d) {
        auto& h = heaps_[i - 1];
        h.clear();
        for (int j = 1; j <= n_; ++j)
            if (!dead_[vid(i, j)]) h.push_back({ratio(i, d, j), j});
        std::make_heap(h.begin(), h.end(), heap_less);
    }

    struct Best {
        double ratio;
        int row, col;
    };

    // Current best live candidate; ties fall to the smaller row, then the
    // smaller column (the per-row heap order takes care of the latter).
    std::optional<Best> best() const {
        std::optional<Best> out;
        for (int i = 1; i <= m_; ++i) {
            const auto& h = heaps_[i - 1];
            if (h.empty()) continue;
            if (!out || h.front().ratio > out->ratio) out = Best{h.front().ratio, i, h.front().col};
        }
        return out;
    }

    // Permanently drops (i,j); only ever called on the current global best,
    // which sits at its row's root.
    void discard(int i, int j) {
        auto& h = heaps_[i - 1];
        assert(!h.empty() && h.front().col == j);
        std::pop_heap(h.begin(), h.end(), heap_less);
        h.pop_back();
        dead_[vid(i, j)] = 1;
        discarded_[vid(i, j)] = 1;
    }

private:
    struct HeapEntry {
        double ratio;
        int col;
    };
    static bool heap_less(const HeapEntry& a, const HeapEntry& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        return a.col > b.col;
    }

    size_t vid(int i, int j) const { return static_cast<size_t>(i - 1) * n_ + (j - 1); }

    const AisleGraph& g_;
    const CumulativeTable& t_;
    Numerator kind_;
    int m_, n_;
    std::vector<char> dead_;       // visited or discarded: out of the pool
    std::vector<char> discarded_;  // dropped as unaffordable, permanently
    std::vector<std::vector<HeapEntry>> heaps_;
};

namespace detail {

inline SolverResult solve_ratio_greedy(const AisleGraph& g, int budget,
                                       RatioIndex::Numerator kind) {
    Timer timer;
    int b = even_budget(budget);
    int m = g.rows(), n = g.cols();
    CumulativeTable t(g);

    // Fallback: the single best vertex whose round trip fits the budget.
    RouteSolution best_single;
    best_single.depths.assign(m, 0);
    {
        double best_r = 0.0;
        int bi = 0, bj = 0;
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= n; ++j)
                if (2 * (i - 1) + 2 * (j - 1) <= b && g.reward(i, j) > best_r) {
                    best_r = g.reward(i, j);
                    bi = i;
                    bj = j;
                }
        if (bi > 0) {
            std::vector<int> d(m, 0);
            d[bi - 1] = bj;
            best_single = make_route_solution(g, d);
            // The fallback is valued by the chosen vertex alone, even though
            // the walk to it passes (and in practice collects) its prefix.
            best_single.reward = best_r;
        }
    }

    GrowingRoute route(g, t);
    RatioIndex index(g, t, kind);
    // The home vertex makes row 1 count as entered from the start; deeper
    // rows begin at their distance-from-home offset.
    index.rebuild_entered(1, 1);
    for (int i = 2; i <= m; ++i) index.rebuild_below(i, i - 1);

    while (auto c = index.best()) {
        int mc = route.marginal(c->row, c->col);
        if (route.cost() + mc <= b) {
            assert(!index.is_discarded(c->row, c->col));
            int old_eff = std::max(route.solution().i_max, 1);
            route.add(c->row, c->col);
            for (int k = 1; k <= c->col; ++k) index.mark_visited(c->row, k);
            int new_eff = std::max(route.solution().i_max, 1);
            if (new_eff > old_eff) {
                // The turnaround row moved: every row past the old one sees
                // new denominators.
                for (int i = old_eff + 1; i <= m; ++i) {
                    if (i <= new_eff)
                        index.rebuild_entered(i, std::max(route.solution().depths[i - 1], 1));
                    else
                        index.rebuild_below(i, i - new_eff);
                }
            } else {
                index.rebuild_entered(c->row, c->col);
            }
        } else {
            index.discard(c->row, c->col);
        }
    }

    SolverResult result;
    result.algorithm =
        kind == RatioIndex::Numerator::element ? Algorithm::apxmre : Algorithm::apxmrc;
    const RouteSolution& grown = route.solution();
    result.solution = grown.reward >= best_single.reward ? grown : best_single;
    result.best_single = std::move(best_single);
    result.runtime_ms = timer.ms();
    return result;
}

}  // namespace detail

inline SolverResult solve_apxmre(const AisleGraph& g, int budget) {
    return detail::solve_ratio_greedy(g, budget, RatioIndex::Numerator::element);
}

inline SolverResult solve_apxmrc(const AisleGraph& g, int budget) {
    return detail::solve_ratio_greedy(g, budget, RatioIndex::Numerator::cumulative);
}

// ---------------------------------------------------------------------------
// Exhaustive baseline over all depth profiles, for tiny instances only.
// ---------------------------------------------------------------------------

namespace detail {

// Calls fn(cost, reward, depths) for every canonical depth profile (no
// zero-depth row ahead of a deeper one), in lexicographic order.
template <typename Fn>
inline void enumerate_profiles(const AisleGraph& g, const CumulativeTable& t, Fn&& fn) {
    int m = g.rows(), n = g.cols();
    if (m * std::log2(n + 1.0) > 30.0)
        throw std::invalid_argument("A(" + std::to_string(m) + "," + std::to_string(n) +
                                    ") is too large for exhaustive enumeration");
    std::vector<int> d(m, 0);
    while (true) {
        int i_max = 0;
        bool canonical = true;
        for (int i = m; i >= 1; --i) {
            if (d[i - 1] > 0 && i_max == 0) i_max = i;
            if (d[i - 1] == 0 && i_max > 0 && i < i_max) canonical = false;
        }
        if (canonical) {
            int units = i_max > 0 ? i_max - 1 : 0;
            double reward = 0.0;
            for (int i = 1; i <= i_max; ++i) {
                units += d[i - 1] - 1;
                reward += t.prefix(i, d[i - 1]);
            }
            fn(2 * units, reward, d);
        }
        int k = m - 1;
        while (k >= 0 && d[k] == n) d[k--] = 0;
        if (k < 0) break;
        ++d[k];
    }
}

}  // namespace detail

inline SolverResult solve_brute_force(const AisleGraph& g, int budget) {
    detail::Timer timer;
    int b = detail::even_budget(budget);
    CumulativeTable t(g);
    double best = detail::kNegInf;
    std::vector<int> best_depths(g.rows(), 0);
    detail::enumerate_profiles(g, t, [&](int cost, double reward, const std::vector<int>& d) {
        if (cost <= b && reward > best) {  // strict: first (lex-smallest) profile wins ties
            best = reward;
            best_depths = d;
        }
    });
    SolverResult result;
    result.algorithm = Algorithm::brute_force;
    result.solution = make_route_solution(g, best_depths);
    result.runtime_ms = timer.ms();
    return result;
}

// Optimum reward for every even budget 0, 2, .., 2*(budget/2) in one sweep of
// the profile space; entry b holds the optimum at budget 2b.
inline std::vector<double> brute_force_reward_curve(const AisleGraph& g, int budget) {
    int bmax = detail::even_budget(budget) / 2;
    CumulativeTable t(g);
    std::vector<double> curve(bmax + 1, 0.0);
    detail::enumerate_profiles(g, t, [&](int cost, double reward, const std::vector<int>&) {
        int b = cost / 2;
        if (b <= bmax && reward > curve[b]) curve[b] = reward;
    });
    for (int b = 1; b <= bmax; ++b) curve[b] = std::max(curve[b], curve[b - 1]);
    return curve;
}

inline SolverResult solve(const AisleGraph& g, Algorithm a, int budget) {
    switch (a) {
        case Algorithm::optsa: return solve_optsa(g, budget).result;
        case Algorithm::gdyme: return solve_gdyme(g, budget);
        case Algorithm::gdymc: return solve_gdymc(g, budget);
        case Algorithm::apxmre: return solve_apxmre(g, budget);
        case Algorithm::apxmrc: return solve_apxmrc(g, budget);
        case Algorithm::brute_force: return solve_brute_force(g, budget);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace oasp
