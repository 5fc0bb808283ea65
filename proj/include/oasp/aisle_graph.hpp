#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Single-access aisle-graph model A(m,n): m parallel rows of n vertices each,
// interconnected only through column 1. The robot starts and ends at the home
// vertex (1,1); every edge costs one unit of budget. Column-1 vertices carry
// no reward, so a route is fully described by how deep it goes into each row.
//
// Indices are 1-based everywhere (row i in [1,m], column j in [1,n]) to match
// the instance file format.

namespace oasp {

class AisleGraph {
public:
    AisleGraph(int m, int n, const std::vector<std::vector<double>>& rewards)
        : m_(m), n_(n) {
        if (m < 1 || n < 1)
            throw std::invalid_argument("aisle-graph dimensions must be at least 1x1, got " +
                                        std::to_string(m) + "x" + std::to_string(n));
        if (static_cast<int>(rewards.size()) != m)
            throw std::invalid_argument("reward grid has " + std::to_string(rewards.size()) +
                                        " rows, expected " + std::to_string(m));
        cells_.reserve(static_cast<size_t>(m) * n);
        total_ = 0.0;
        for (int i = 1; i <= m; ++i) {
            const auto& row = rewards[i - 1];
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("reward row " + std::to_string(i) + " has " +
                                            std::to_string(row.size()) + " columns, expected " +
                                            std::to_string(n));
            for (int j = 1; j <= n; ++j) {
                double v = row[j - 1];
                if (!std::isfinite(v) || v < 0.0)
                    throw std::invalid_argument("reward at (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") must be finite and non-negative");
                if (j == 1 && v != 0.0)
                    throw std::invalid_argument("reward at (" + std::to_string(i) +
                                                ",1) must be 0: column 1 is the interconnect column");
                cells_.push_back(v);
                total_ += v;
            }
        }
    }

    int rows() const { return m_; }
    int cols() const { return n_; }

    double reward(int i, int j) const {
        check_vertex(i, j);
        return cells_[static_cast<size_t>(i - 1) * n_ + (j - 1)];
    }

    double total_reward() const { return total_; }

    void check_vertex(int i, int j) const {
        if (i < 1 || i > m_ || j < 1 || j > n_)
            throw std::out_of_range("vertex (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") out of range for A(" + std::to_string(m_) + "," +
                                    std::to_string(n_) + ")");
    }

private:
    int m_, n_;
    std::vector<double> cells_;  // row-major
    double total_;
};

// Per-row prefix sums of rewards: prefix(i,j) is the total collected by
// sweeping row i from column 1 to column j. prefix(i,1) is always 0.
class CumulativeTable {
public:
    explicit CumulativeTable(const AisleGraph& g) : m_(g.rows()), n_(g.cols()) {
        sums_.reserve(static_cast<size_t>(m_) * n_);
        for (int i = 1; i <= m_; ++i) {
            double running = 0.0;
            for (int j = 1; j <= n_; ++j) {
                running += g.reward(i, j);
                sums_.push_back(running);
            }
        }
    }

    int rows() const { return m_; }
    int cols() const { return n_; }

    double prefix(int i, int j) const {
        if (i < 1 || i > m_ || j < 1 || j > n_)
            throw std::out_of_range("prefix (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") out of range for A(" + std::to_string(m_) + "," +
                                    std::to_string(n_) + ")");
        return sums_[static_cast<size_t>(i - 1) * n_ + (j - 1)];
    }

    double row_total(int i) const { return prefix(i, n_); }

private:
    int m_, n_;
    std::vector<double> sums_;
};

// A route as a depth profile: depths[i-1] is the deepest column visited in
// row i, 0 if the route never reaches that row. Stored normalized: every row
// up to i_max has depth >= 1 (reaching deeper rows passes through column 1 of
// the rows in between), and every row past i_max has depth 0.
struct RouteSolution {
    std::vector<int> depths;
    int i_max = 0;   // deepest row reached, 0 for the empty route
    int cost = 0;    // number of edges of the closed walk from home, always even
    double reward = 0.0;

    bool empty() const { return i_max == 0; }
};

namespace detail {

inline void check_depths(const AisleGraph& g, const std::vector<int>& depths) {
    if (static_cast<int>(depths.size()) != g.rows())
        throw std::invalid_argument("depth vector has " + std::to_string(depths.size()) +
                                    " entries, expected " + std::to_string(g.rows()));
    for (int i = 1; i <= g.rows(); ++i) {
        int d = depths[i - 1];
        if (d < 0 || d > g.cols())
            throw std::invalid_argument("depth " + std::to_string(d) + " at row " +
                                        std::to_string(i) + " out of range [0," +
                                        std::to_string(g.cols()) + "]");
    }
}

inline int deepest_row(const std::vector<int>& depths) {
    for (int i = static_cast<int>(depths.size()); i >= 1; --i)
        if (depths[i - 1] > 0) return i;
    return 0;
}

}  // namespace detail

// Cost of the cheapest closed walk from home visiting the given depth profile:
// 2 * (sum over rows <= i_max of (max(d_i,1) - 1) + (i_max - 1)).
// Rows at depth 0 below i_max still cost their column-1 pass-through, hence
// the max(d_i,1). Twice the tree size short of one, so always even.
inline int route_cost(const AisleGraph& g, const std::vector<int>& depths) {
    detail::check_depths(g, depths);
    int i_max = detail::deepest_row(depths);
    if (i_max == 0) return 0;
    int units = i_max - 1;
    for (int i = 1; i <= i_max; ++i) units += std::max(depths[i - 1], 1) - 1;
    return 2 * units;
}

// Reward collected by the profile: sum of row prefixes up to each depth.
inline double route_reward(const AisleGraph& g, const std::vector<int>& depths) {
    detail::check_depths(g, depths);
    int i_max = detail::deepest_row(depths);
    double total = 0.0;
    for (int i = 1; i <= i_max; ++i) {
        int d = std::max(depths[i - 1], 1);
        for (int j = 2; j <= d; ++j) total += g.reward(i, j);
    }
    return total;
}

// Normalizes a depth profile into a RouteSolution with cost and reward filled in.
inline RouteSolution make_route_solution(const AisleGraph& g, std::vector<int> depths) {
    detail::check_depths(g, depths);
    RouteSolution s;
    s.i_max = detail::deepest_row(depths);
    for (int i = 1; i <= s.i_max; ++i) depths[i - 1] = std::max(depths[i - 1], 1);
    s.cost = route_cost(g, depths);
    s.reward = route_reward(g, depths);
    s.depths = std::move(depths);
    return s;
}

// Extra cost of extending a route to also visit (i,j), in constant time.
// The home row counts as reached even for the empty route (the home vertex
// anchors the visit tree), hence the max(i_max, 1).
inline int marginal_cost(const AisleGraph& g, const RouteSolution& current, int i, int j) {
    g.check_vertex(i, j);
    int i_max_eff = std::max(current.i_max, 1);
    if (i > i_max_eff) return 2 * (i - i_max_eff) + 2 * (j - 1);
    int d = (i <= current.i_max) ? std::max(current.depths[i - 1], 1) : 1;
    return 2 * std::max(0, j - d);
}

// Budget that exactly covers visiting every vertex: 2(mn - 1) edges.
inline int full_visit_budget(int m, int n) { return 2 * (m * n - 1); }
inline int full_visit_budget(const AisleGraph& g) { return full_visit_budget(g.rows(), g.cols()); }

// Coarser sufficiency bound 2nm + 2(m - 1): n units out and back per row plus
// the column-1 spine both ways.
inline int full_visit_budget_bound(int m, int n) { return 2 * n * m + 2 * (m - 1); }
inline int full_visit_budget_bound(const AisleGraph& g) {
    return full_visit_budget_bound(g.rows(), g.cols());
}

// Upper end of benchmark budget sweeps and the base for percentage budgets:
// 2(mn + m), comfortably past the full visit.
inline int sweep_budget_ceiling(int m, int n) { return 2 * (m * n + m); }
inline int sweep_budget_ceiling(const AisleGraph& g) {
    return sweep_budget_ceiling(g.rows(), g.cols());
}

}  // namespace oasp
