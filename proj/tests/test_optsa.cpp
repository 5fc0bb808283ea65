#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace oasp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("exact solver reproduces the reference table cell for cell") {
    AisleGraph g = support::worked_example();
    OptsaOutput out = solve_optsa(g, 16);
    const DpTables& t = out.tables;
    REQUIRE(t.rows == 4);
    REQUIRE(t.half_budget == 8);

    const double R[4][9] = {
        {0, 3, 4, 8, 9, 9, 9, 9, 9},
        {-kInf, 0, 3, 4, 11, 17, 20, 21, 25},
        {-kInf, -kInf, 0, 3, 10, 19, 28, 31, 32},
        {-kInf, -kInf, -kInf, 0, 3, 10, 19, 28, 31},
    };
    // 0 marks the unreachable cells that carry no depth
    const int Q[4][9] = {
        {1, 2, 3, 4, 5, 5, 5, 5, 5},
        {0, 1, 1, 1, 4, 5, 5, 5, 5},
        {0, 0, 1, 1, 3, 4, 5, 5, 5},
        {0, 0, 0, 1, 1, 1, 1, 1, 1},
    };
    for (int i = 1; i <= 4; ++i)
        for (int b = 0; b <= 8; ++b) {
            INFO("cell (" << i << "," << b << ")");
            REQUIRE(t.reward_at(i, b) == R[i - 1][b]);
            REQUIRE(t.depth_at(i, b) == Q[i - 1][b]);
        }

    REQUIRE(t.optimum() == 32.0);
    REQUIRE(t.optimum_row() == 3);
    REQUIRE(out.result.solution.reward == 32.0);
    REQUIRE(out.result.solution.cost == 16);
    REQUIRE(out.result.solution.depths == std::vector<int>{3, 1, 5, 0});

    REQUIRE_THROWS_AS(t.reward_at(5, 0), std::out_of_range);
    REQUIRE_THROWS_AS(t.reward_at(1, 9), std::out_of_range);
}

TEST_CASE("exact solver edge budgets") {
    AisleGraph g = support::worked_example();
    SECTION("zero budget buys the empty route") {
        SolverResult r = solve_optsa(g, 0).result;
        REQUIRE(r.solution.reward == 0.0);
        REQUIRE(r.solution.cost == 0);
        REQUIRE(r.solution.empty());
    }
    SECTION("odd budgets round down") {
        REQUIRE(solve_optsa(g, 17).result.solution.reward ==
                solve_optsa(g, 16).result.solution.reward);
    }
    SECTION("the full-visit budget collects everything") {
        REQUIRE(solve_optsa(g, full_visit_budget(g)).result.solution.reward == 58.0);
        REQUIRE(solve_optsa(g, sweep_budget_ceiling(g)).result.solution.reward == 58.0);
    }
    SECTION("negative budgets are rejected") {
        REQUIRE_THROWS_AS(solve_optsa(g, -2), std::invalid_argument);
    }
}

TEST_CASE("table structure invariants") {
    std::mt19937_64 rng(7);
    AisleGraph g = support::random_int_graph(rng, 5, 4, 12);
    DpTables t = solve_optsa(g, sweep_budget_ceiling(g)).tables;
    for (int i = 1; i <= t.rows; ++i) {
        for (int b = 0; b <= t.half_budget; ++b) {
            if (b < i - 1) {
                REQUIRE(t.reward_at(i, b) == -kInf);
                REQUIRE(t.depth_at(i, b) == 0);
            } else {
                REQUIRE(t.reward_at(i, b) >= 0.0);
                REQUIRE(t.depth_at(i, b) >= 1);
                if (i >= 2 && b == i - 1) REQUIRE(t.reward_at(i, b) == 0.0);
                if (b > 0 && b - 1 >= i - 1)
                    REQUIRE(t.reward_at(i, b) >= t.reward_at(i, b - 1));  // rows non-decreasing
            }
        }
    }
    // row 1 is the deepest affordable prefix
    CumulativeTable ct(g);
    for (int b = 0; b <= t.half_budget; ++b)
        REQUIRE(t.reward_at(1, b) == ct.prefix(1, std::min(b + 1, g.cols())));
}

TEST_CASE("exact solver matches exhaustive enumeration on small instances") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int m = 1 + static_cast<int>(rng() % 4);
        int n = 1 + static_cast<int>(rng() % 4);
        AisleGraph g = support::random_int_graph(rng, m, n, 15);
        int ceiling = sweep_budget_ceiling(g);
        std::vector<double> curve = brute_force_reward_curve(g, ceiling);
        DpTables tables = solve_optsa(g, ceiling).tables;
        for (int b = 0; b <= ceiling / 2; ++b) {
            double dp_best = tables.reward_at(1, b);
            for (int i = 2; i <= m; ++i) dp_best = std::max(dp_best, tables.reward_at(i, b));
            INFO("A(" << m << "," << n << ") at budget " << 2 * b);
            REQUIRE(dp_best == curve[b]);
        }
        // spot-check the returned route at a few budgets
        for (int b : {0, ceiling / 4, ceiling / 2}) {
            SolverResult r = solve_optsa(g, 2 * b).result;
            REQUIRE(r.solution.reward == curve[std::min(b, ceiling / 2)]);
            REQUIRE(r.solution.cost <= 2 * b);
            REQUIRE(route_cost(g, r.solution.depths) == r.solution.cost);
            REQUIRE_THAT(route_reward(g, r.solution.depths),
                         Catch::Matchers::WithinAbs(r.solution.reward, 1e-9));
        }
    }
}

TEST_CASE("single-row instances reduce to the best prefix") {
    std::mt19937_64 rng(13);
    AisleGraph g = support::random_int_graph(rng, 1, 8, 20);
    CumulativeTable t(g);
    for (int b = 0; b <= sweep_budget_ceiling(g) / 2; ++b) {
        SolverResult r = solve_optsa(g, 2 * b).result;
        REQUIRE(r.solution.reward == t.prefix(1, std::min(b + 1, 8)));
    }
}

TEST_CASE("optimum is non-decreasing in the budget") {
    std::mt19937_64 rng(17);
    AisleGraph g = support::random_int_graph(rng, 4, 6, 10);
    double last = -1.0;
    for (int b = 0; b <= sweep_budget_ceiling(g); b += 2) {
        double r = solve_optsa(g, b).result.solution.reward;
        REQUIRE(r >= last);
        last = r;
    }
}
