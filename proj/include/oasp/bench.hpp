#pragma once

#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "oasp/format.hpp"
#include "oasp/instances.hpp"
#include "oasp/solvers.hpp"

// Benchmark harness: runs a batch of same-sized instances across a budget
// grid and a set of solvers, producing one row per (instance, budget,
// algorithm) plus per-(budget, algorithm) aggregates.

namespace oasp {

struct SweepInstance {
    std::string id;
    std::string tag;  // provenance label, e.g. "theta=0.9" or "moisture"
    AisleGraph graph;
};

struct SweepConfig {
    std::vector<int> budgets;  // even edge counts within [0, sweep_budget_ceiling]
    std::vector<Algorithm> algorithms{Algorithm::optsa, Algorithm::gdyme, Algorithm::gdymc,
                                      Algorithm::apxmre, Algorithm::apxmrc};
    int jobs = 1;
};

struct SweepRow {
    std::string instance_id;
    std::string tag;
    int m = 0, n = 0;
    int budget = 0;
    double budget_pct = 0.0;  // of the sweep ceiling 2(mn+m)
    std::string algorithm;
    double reward = 0.0;
    double reward_pct = 0.0;  // of the total grid reward
    int cost = 0;
    std::optional<double> rho;  // reward / optsa reward; empty when optsa is not run
    double runtime_ms = 0.0;
};

struct SweepAggregate {
    int budget = 0;
    std::string algorithm;
    int count = 0;
    double mean_reward = 0.0, ci95_reward = 0.0;
    double mean_reward_pct = 0.0, ci95_reward_pct = 0.0;
    std::optional<double> mean_rho, ci95_rho;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<SweepAggregate> aggregates;
};

// Evenly spaced even budgets from 2n (one full row sweep and back) up to the
// sweep ceiling, at most count of them, endpoints always included.
inline std::vector<int> even_budget_grid(int m, int n, int count = 50) {
    if (m < 1 || n < 1) throw std::invalid_argument("bad dimensions for budget grid");
    if (count < 1) throw std::invalid_argument("budget grid needs at least one point");
    int lo = 2 * n, hi = sweep_budget_ceiling(m, n);
    std::vector<int> out;
    if (count == 1 || lo == hi) return {hi};
    if ((hi - lo) / 2 + 1 <= count) {
        for (int b = lo; b <= hi; b += 2) out.push_back(b);
        return out;
    }
    for (int k = 0; k < count; ++k) {
        double x = lo + static_cast<double>(hi - lo) * k / (count - 1);
        int b = static_cast<int>(std::lround(x / 2.0)) * 2;
        b = std::clamp(b, lo, hi);
        if (out.empty() || b != out.back()) out.push_back(b);
    }
    return out;
}

namespace detail {

inline void mean_ci(const std::vector<double>& xs, double& mean, double& ci) {
    size_t k = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    mean = sum / k;
    if (k < 2) {
        ci = 0.0;
        return;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    ci = 1.96 * std::sqrt(ss / (k - 1) / k);
}

}  // namespace detail

inline SweepReport run_sweep(const std::vector<SweepInstance>& batch, const SweepConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("instance batch is empty");
    int m = batch[0].graph.rows(), n = batch[0].graph.cols();
    for (const auto& inst : batch)
        if (inst.graph.rows() != m || inst.graph.cols() != n)
            throw std::invalid_argument("instances in a batch must share dimensions; " + inst.id +
                                        " is " + std::to_string(inst.graph.rows()) + "x" +
                                        std::to_string(inst.graph.cols()) + ", expected " +
                                        std::to_string(m) + "x" + std::to_string(n));
    int ceiling = sweep_budget_ceiling(m, n);
    if (cfg.budgets.empty()) throw std::invalid_argument("budget grid is empty");
    for (int b : cfg.budgets) {
        if (b < 0 || b > ceiling)
            throw std::invalid_argument("budget " + std::to_string(b) + " outside [0, " +
                                        std::to_string(ceiling) + "]");
        if (b % 2 != 0) throw std::invalid_argument("budget " + std::to_string(b) + " must be even");
    }
    if (cfg.algorithms.empty()) throw std::invalid_argument("algorithm set is empty");
    bool has_optsa = false;
    for (size_t a = 0; a < cfg.algorithms.size(); ++a) {
        if (cfg.algorithms[a] == Algorithm::brute_force)
            throw std::invalid_argument("brute is not a sweep algorithm");
        if (cfg.algorithms[a] == Algorithm::optsa) has_optsa = true;
        for (size_t b2 = a + 1; b2 < cfg.algorithms.size(); ++b2)
            if (cfg.algorithms[a] == cfg.algorithms[b2])
                throw std::invalid_argument("duplicate algorithm in sweep config");
    }
    if (cfg.jobs < 1) throw std::invalid_argument("jobs must be >= 1");

    struct Task {
        int inst;
        int budget;
    };
    std::vector<Task> tasks;
    for (int i = 0; i < static_cast<int>(batch.size()); ++i)
        for (int b : cfg.budgets) tasks.push_back({i, b});

    std::vector<std::vector<SweepRow>> slots(tasks.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto work = [&]() {
        for (size_t k; (k = next.fetch_add(1)) < tasks.size();) {
            if (failed.load()) return;
            try {
                const Task& task = tasks[k];
                const SweepInstance& inst = batch[task.inst];
                double total = inst.graph.total_reward();
                std::vector<SweepRow>& rows = slots[k];
                std::optional<double> opt_reward;
                for (Algorithm a : cfg.algorithms) {
                    SolverResult r = solve(inst.graph, a, task.budget);
                    SweepRow row;
                    row.instance_id = inst.id;
                    row.tag = inst.tag;
                    row.m = m;
                    row.n = n;
                    row.budget = task.budget;
                    row.budget_pct = 100.0 * task.budget / ceiling;
                    row.algorithm = algorithm_name(a);
                    row.reward = r.solution.reward;
                    row.reward_pct = total > 0.0 ? 100.0 * r.solution.reward / total : 100.0;
                    row.cost = r.solution.cost;
                    row.runtime_ms = r.runtime_ms;
                    if (a == Algorithm::optsa) opt_reward = r.solution.reward;
                    rows.push_back(std::move(row));
                }
                if (opt_reward) {
                    for (SweepRow& row : rows)
                        row.rho = (*opt_reward == 0.0 && row.reward == 0.0)
                                      ? 1.0
                                      : row.reward / *opt_reward;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    SweepReport report;
    for (auto& rows : slots)
        for (auto& row : rows) report.rows.push_back(std::move(row));

    // Sanity on the way out: rho within [0,1] and the ratio solvers above
    // their proven floor. A violation here is a solver bug, not bad input.
    if (has_optsa) {
        double floor = apx_guarantee() - 1e-9;
        for (const SweepRow& row : report.rows) {
            if (!row.rho) continue;
            if (*row.rho < -1e-9 || *row.rho > 1.0 + 1e-9)
                throw std::logic_error("rho " + std::to_string(*row.rho) + " out of [0,1] for " +
                                       row.algorithm + " on " + row.instance_id + " at budget " +
                                       std::to_string(row.budget));
            if ((row.algorithm == "apxmre" || row.algorithm == "apxmrc") && *row.rho < floor)
                throw std::logic_error("approximation bound violated: rho " +
                                       std::to_string(*row.rho) + " for " + row.algorithm + " on " +
                                       row.instance_id + " at budget " + std::to_string(row.budget));
        }
    }

    std::sort(report.rows.begin(), report.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        if (a.budget != b.budget) return a.budget < b.budget;
        return a.algorithm < b.algorithm;
    });

    // Aggregates per (budget, algorithm) across the batch, in row order.
    std::vector<int> budgets_sorted = cfg.budgets;
    std::sort(budgets_sorted.begin(), budgets_sorted.end());
    budgets_sorted.erase(std::unique(budgets_sorted.begin(), budgets_sorted.end()),
                         budgets_sorted.end());
    std::vector<std::string> names;
    for (Algorithm a : cfg.algorithms) names.push_back(algorithm_name(a));
    std::sort(names.begin(), names.end());
    for (int b : budgets_sorted) {
        for (const std::string& name : names) {
            std::vector<double> rewards, pcts, rhos;
            for (const SweepRow& row : report.rows) {
                if (row.budget != b || row.algorithm != name) continue;
                rewards.push_back(row.reward);
                pcts.push_back(row.reward_pct);
                if (row.rho) rhos.push_back(*row.rho);
            }
            SweepAggregate agg;
            agg.budget = b;
            agg.algorithm = name;
            agg.count = static_cast<int>(rewards.size());
            detail::mean_ci(rewards, agg.mean_reward, agg.ci95_reward);
            detail::mean_ci(pcts, agg.mean_reward_pct, agg.ci95_reward_pct);
            if (rhos.size() == rewards.size()) {
                double mean = 0.0, ci = 0.0;
                detail::mean_ci(rhos, mean, ci);
                agg.mean_rho = mean;
                agg.ci95_rho = ci;
            }
            report.aggregates.push_back(std::move(agg));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

inline void emit_csv(const SweepReport& report, std::ostream& out, bool with_timing = true) {
    out << "instance_id,tag,m,n,budget,budget_pct,algorithm,reward,reward_pct,cost,rho";
    if (with_timing) out << ",runtime_ms";
    out << "\n";
    for (const SweepRow& row : report.rows) {
        if (row.instance_id.find_first_of(",\n") != std::string::npos ||
            row.tag.find_first_of(",\n") != std::string::npos)
            throw std::invalid_argument("instance id and tag must not contain commas or newlines");
        out << row.instance_id << ',' << row.tag << ',' << row.m << ',' << row.n << ','
            << row.budget << ',' << detail::format_number(row.budget_pct) << ',' << row.algorithm
            << ',' << detail::format_number(row.reward) << ','
            << detail::format_number(row.reward_pct) << ',' << row.cost << ','
            << (row.rho ? detail::format_number(*row.rho) : std::string());
        if (with_timing) out << ',' << detail::format_number(row.runtime_ms);
        out << "\n";
    }
}

inline void emit_json(const SweepReport& report, std::ostream& out, bool with_timing = true) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : report.rows) {
        nlohmann::json j = {{"instance_id", row.instance_id},
                            {"tag", row.tag},
                            {"m", row.m},
                            {"n", row.n},
                            {"budget", row.budget},
                            {"budget_pct", row.budget_pct},
                            {"algorithm", row.algorithm},
                            {"reward", detail::json_number(row.reward)},
                            {"reward_pct", row.reward_pct},
                            {"cost", row.cost},
                            {"rho", row.rho ? nlohmann::json(detail::json_number(*row.rho))
                                            : nlohmann::json(nullptr)}};
        if (with_timing) j["runtime_ms"] = row.runtime_ms;
        rows.push_back(std::move(j));
    }
    nlohmann::json aggs = nlohmann::json::array();
    for (const SweepAggregate& a : report.aggregates) {
        nlohmann::json j = {{"budget", a.budget},
                            {"algorithm", a.algorithm},
                            {"count", a.count},
                            {"mean_reward", detail::json_number(a.mean_reward)},
                            {"ci95_reward", detail::json_number(a.ci95_reward)},
                            {"mean_reward_pct", a.mean_reward_pct},
                            {"ci95_reward_pct", a.ci95_reward_pct},
                            {"mean_rho", a.mean_rho ? nlohmann::json(detail::json_number(*a.mean_rho))
                                                    : nlohmann::json(nullptr)},
                            {"ci95_rho", a.ci95_rho ? nlohmann::json(detail::json_number(*a.ci95_rho))
                                                    : nlohmann::json(nullptr)}};
        aggs.push_back(std::move(j));
    }
    nlohmann::json doc = {{"rows", std::move(rows)}, {"aggregates", std::move(aggs)}};
    out << doc.dump(2) << "\n";
}

inline void write_csv(const SweepReport& report, const std::filesystem::path& path,
                      bool with_timing = true) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report file " + path.string());
    emit_csv(report, out, with_timing);
    if (!out) throw io_error("failed writing report file " + path.string());
}

inline void write_json(const SweepReport& report, const std::filesystem::path& path,
                       bool with_timing = true) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report file " + path.string());
    emit_json(report, out, with_timing);
    if (!out) throw io_error("failed writing report file " + path.string());
}

}  // namespace oasp
