// Command-line front end: instance generation, single solves, budget sweeps
// and a self-check of the exact solver against exhaustive enumeration.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 internal
// invariant failure. Errors are a single "error: ..." line on stderr.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oasp/oasp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string single_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

// Budgets are even edge counts, or percentages of the sweep ceiling 2(mn+m).
int parse_budget(const std::string& text, int ceiling) {
    if (text.empty()) throw std::invalid_argument("empty budget");
    if (text.back() == '%') {
        double pct = 0.0;
        size_t used = 0;
        try {
            pct = std::stod(text.substr(0, text.size() - 1), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad budget percentage '" + text + "'");
        }
        if (used != text.size() - 1 || !(pct >= 0.0) || pct > 100.0)
            throw std::invalid_argument("budget percentage '" + text + "' must be in [0%,100%]");
        int b = static_cast<int>(pct / 100.0 * ceiling);
        return b - (b % 2);
    }
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad budget '" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("bad budget '" + text + "'");
    if (v < 0 || v > ceiling)
        throw std::invalid_argument("budget " + text + " outside [0, " + std::to_string(ceiling) +
                                    "]");
    if (v % 2 != 0)
        throw std::invalid_argument("budget " + text + " must be even (route costs are even)");
    return static_cast<int>(v);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        out.push_back(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

json solution_json(const oasp::SolverResult& r, int budget) {
    json j = {{"algorithm", oasp::algorithm_name(r.algorithm)},
              {"budget", budget},
              {"reward", oasp::detail::json_number(r.solution.reward)},
              {"cost", r.solution.cost},
              {"depths", r.solution.depths}};
    if (r.best_single)
        j["best_single"] = {{"reward", oasp::detail::json_number(r.best_single->reward)},
                            {"cost", r.best_single->cost},
                            {"depths", r.best_single->depths}};
    return j;
}

struct GenerateArgs {
    int m = 0, n = 0;
    double theta = 0.0;
    int max_reward = 100;
    std::uint64_t seed = 0;
    int count = 1;
    std::string out_dir;
};

int cmd_generate(const GenerateArgs& a) {
    fs::create_directories(a.out_dir);
    int width = std::max<int>(3, std::to_string(a.count - 1).size());
    for (int k = 0; k < a.count; ++k) {
        oasp::ZipfConfig cfg;
        cfg.theta = a.theta;
        cfg.max_reward = a.max_reward;
        cfg.seed = a.seed + static_cast<std::uint64_t>(k);
        oasp::AisleGraph g = oasp::generate_zipf(a.m, a.n, cfg);
        std::string idx = std::to_string(k);
        idx.insert(0, width - idx.size(), '0');
        fs::path base = fs::path(a.out_dir) / ("instance_" + idx);
        oasp::write_instance(g, base.string() + ".json");
        oasp::GeneratorMetadata meta{cfg.theta, cfg.seed, oasp::kZipfGeneratorId};
        oasp::write_metadata(meta, base.string() + ".meta.json");
    }
    std::cout << "wrote " << a.count << " instances to " << a.out_dir << "\n";
    return 0;
}

struct SolveArgs {
    std::string instance;
    std::string budget;
    std::string algorithm = "all";
    std::string out;
};

int cmd_solve(const SolveArgs& a) {
    oasp::AisleGraph g = oasp::read_instance(a.instance);
    int budget = parse_budget(a.budget, oasp::sweep_budget_ceiling(g));

    std::vector<oasp::Algorithm> algs;
    if (a.algorithm == "all") {
        algs = {oasp::Algorithm::optsa, oasp::Algorithm::gdyme, oasp::Algorithm::gdymc,
                oasp::Algorithm::apxmre, oasp::Algorithm::apxmrc};
    } else if (auto parsed = oasp::parse_algorithm(a.algorithm)) {
        algs = {*parsed};
    } else {
        throw std::invalid_argument("unknown algorithm '" + a.algorithm + "'");
    }

    std::ostringstream lines;
    for (oasp::Algorithm alg : algs)
        lines << solution_json(oasp::solve(g, alg, budget), budget).dump() << "\n";

    if (a.out.empty()) {
        std::cout << lines.str();
    } else {
        std::ofstream out(a.out);
        if (!out) throw oasp::io_error("cannot write " + a.out);
        out << lines.str();
        if (!out) throw oasp::io_error("failed writing " + a.out);
    }
    return 0;
}

struct SweepArgs {
    std::string instances_dir;
    std::string moisture;
    double target = 0.0;
    bool target_set = false;
    bool transpose = false;
    std::string algorithms = "all";
    std::string budget_grid;
    int budget_count = 50;
    std::string out;
    std::string json_out;
    bool no_timing = false;
    int jobs = 0;  // 0: fall back to OASP_JOBS, then 1
};

int resolve_jobs(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("OASP_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw std::invalid_argument("OASP_JOBS must be a positive integer, got '" +
                                        std::string(env) + "'");
        return static_cast<int>(v);
    }
    return 1;
}

std::vector<oasp::SweepInstance> load_batch(const SweepArgs& a) {
    std::vector<oasp::SweepInstance> batch;
    if (a.instances_dir.empty() && a.moisture.empty())
        throw std::invalid_argument("provide --instances-dir or --moisture");
    if (!a.instances_dir.empty()) {
        if (!fs::is_directory(a.instances_dir))
            throw oasp::io_error("instance directory " + a.instances_dir + " does not exist");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(a.instances_dir)) {
            if (!entry.is_regular_file()) continue;
            fs::path p = entry.path();
            if (p.extension() != ".json") continue;
            if (p.stem().string().ends_with(".meta")) continue;
            files.push_back(p);
        }
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::invalid_argument("no instance files in " + a.instances_dir);
        for (const fs::path& p : files) {
            std::string stem = p.stem().string();
            std::string tag = "file";
            fs::path meta_path = p.parent_path() / (stem + ".meta.json");
            if (auto meta = oasp::read_metadata(meta_path))
                tag = "theta=" + oasp::detail::format_number(meta->theta);
            batch.push_back({stem, tag, oasp::read_instance(p)});
        }
    } else {
        if (!a.target_set)
            throw std::invalid_argument("--moisture requires --target");
        oasp::MoistureMap map = oasp::read_moisture_csv(a.moisture, a.target);
        if (a.transpose) map = oasp::transpose(map);
        batch.push_back({fs::path(a.moisture).stem().string(), "moisture",
                         oasp::from_moisture(map)});
    }
    return batch;
}

int cmd_sweep(const SweepArgs& a) {
    std::vector<oasp::SweepInstance> batch = load_batch(a);
    int m = batch[0].graph.rows(), n = batch[0].graph.cols();
    int ceiling = oasp::sweep_budget_ceiling(m, n);

    oasp::SweepConfig cfg;
    cfg.jobs = resolve_jobs(a.jobs);
    if (a.algorithms != "all") {
        cfg.algorithms.clear();
        for (const std::string& name : split_commas(a.algorithms)) {
            auto parsed = oasp::parse_algorithm(name);
            if (!parsed) throw std::invalid_argument("unknown algorithm '" + name + "'");
            cfg.algorithms.push_back(*parsed);
        }
    }
    if (a.budget_grid.empty()) {
        cfg.budgets = oasp::even_budget_grid(m, n, a.budget_count);
    } else {
        for (const std::string& token : split_commas(a.budget_grid))
            cfg.budgets.push_back(parse_budget(token, ceiling));
    }

    oasp::SweepReport report = oasp::run_sweep(batch, cfg);
    bool with_timing = !a.no_timing;
    if (a.out.empty())
        oasp::emit_csv(report, std::cout, with_timing);
    else
        oasp::write_csv(report, a.out, with_timing);
    if (!a.json_out.empty()) oasp::write_json(report, a.json_out, with_timing);
    return 0;
}

struct OracleArgs {
    int m_max = 5;
    int n_max = 5;
    int trials = 100;
    std::uint64_t seed = 0;
};

int cmd_oracle_check(const OracleArgs& a) {
    if (a.m_max < 1 || a.n_max < 1) throw std::invalid_argument("m-max and n-max must be >= 1");
    if (a.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (a.m_max * std::log2(a.n_max + 1.0) > 30.0)
        throw std::invalid_argument("m-max/n-max too large for exhaustive enumeration");

    std::mt19937_64 rng(a.seed);
    double bound = oasp::apx_guarantee();
    long cells = 0;
    for (int trial = 0; trial < a.trials; ++trial) {
        int m = 1 + static_cast<int>(rng() % a.m_max);
        int n = 1 + static_cast<int>(rng() % a.n_max);
        std::vector<std::vector<double>> grid(m, std::vector<double>(n, 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 1; j < n; ++j) grid[i][j] = static_cast<double>(rng() % 21);
        oasp::AisleGraph g(m, n, grid);

        int ceiling = oasp::sweep_budget_ceiling(g);
        std::vector<double> curve = oasp::brute_force_reward_curve(g, ceiling);
        oasp::DpTables tables = oasp::solve_optsa(g, ceiling).tables;
        for (int b = 0; b <= ceiling / 2; ++b) {
            ++cells;
            double dp_best = tables.reward_at(1, b);
            for (int i = 2; i <= m; ++i) dp_best = std::max(dp_best, tables.reward_at(i, b));
            oasp::SolverResult exact = oasp::solve_optsa(g, 2 * b).result;
            oasp::SolverResult mre = oasp::solve_apxmre(g, 2 * b);
            oasp::SolverResult mrc = oasp::solve_apxmrc(g, 2 * b);
            std::string failure;
            if (dp_best != curve[b])
                failure = "table optimum " + std::to_string(dp_best) + " != exhaustive " +
                          std::to_string(curve[b]);
            else if (exact.solution.reward != curve[b])
                failure = "optsa reward " + std::to_string(exact.solution.reward) +
                          " != exhaustive " + std::to_string(curve[b]);
            else if (exact.solution.cost > 2 * b)
                failure = "optsa route cost exceeds the budget";
            else if (mre.solution.reward + 1e-9 < bound * curve[b])
                failure = "apxmre reward " + std::to_string(mre.solution.reward) +
                          " below the guarantee at optimum " + std::to_string(curve[b]);
            else if (mrc.solution.reward + 1e-9 < bound * curve[b])
                failure = "apxmrc reward " + std::to_string(mrc.solution.reward) +
                          " below the guarantee at optimum " + std::to_string(curve[b]);
            if (!failure.empty()) {
                std::cout << "counterexample at trial " << trial << ", budget " << 2 * b << ": "
                          << failure << "\n"
                          << oasp::instance_to_json(g).dump() << "\n";
                throw std::logic_error("oracle check failed: " + failure);
            }
        }
    }
    std::cout << "checked " << a.trials << " instances, " << cells
              << " budget cells: exact solver matches exhaustive enumeration, ratio-greedy "
                 "guarantees hold\n";
    return 0;
}

struct InfoArgs {
    std::string instance;
};

int cmd_info(const InfoArgs& a) {
    oasp::AisleGraph g = oasp::read_instance(a.instance);
    json j = {{"m", g.rows()},
              {"n", g.cols()},
              {"total_reward", oasp::detail::json_number(g.total_reward())},
              {"full_visit_budget", oasp::full_visit_budget(g)},
              {"full_visit_budget_bound", oasp::full_visit_budget_bound(g)},
              {"sweep_budget_ceiling", oasp::sweep_budget_ceiling(g)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-access aisle-graph route planning toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "write Zipf-distributed instances");
    generate->add_option("--m", gen.m, "rows")->required()->check(CLI::PositiveNumber);
    generate->add_option("--n", gen.n, "columns")->required()->check(CLI::PositiveNumber);
    generate->add_option("--theta", gen.theta, "Zipf skew, 0 is uniform")->required();
    generate->add_option("--max-reward", gen.max_reward, "rewards drawn from {0..max-1}");
    generate->add_option("--seed", gen.seed, "seed of the first instance; instance k uses seed+k");
    generate->add_option("--count", gen.count, "number of instances")->check(CLI::PositiveNumber);
    generate->add_option("--out-dir", gen.out_dir, "output directory")->required();

    SolveArgs sol;
    CLI::App* solve = app.add_subcommand("solve", "solve one instance at one budget");
    solve->add_option("--instance", sol.instance, "instance JSON file")->required();
    solve->add_option("--budget", sol.budget, "even edge budget, or percentage of 2(mn+m)")
        ->required();
    solve->add_option("--algorithm", sol.algorithm,
                      "optsa|gdyme|gdymc|apxmre|apxmrc|brute|all");
    solve->add_option("--out", sol.out, "write solution lines here instead of stdout");

    SweepArgs swp;
    CLI::App* sweep = app.add_subcommand("sweep", "run solvers across a budget grid");
    auto* dir_opt = sweep->add_option("--instances-dir", swp.instances_dir,
                                      "directory of instance JSON files");
    auto* moist_opt =
        sweep->add_option("--moisture", swp.moisture, "moisture CSV to derive one instance from");
    sweep->add_option("--target", swp.target, "target moisture level")
        ->needs(moist_opt)
        ->each([&swp](const std::string&) { swp.target_set = true; });
    sweep->add_flag("--transpose", swp.transpose, "transpose the moisture grid")->needs(moist_opt);
    dir_opt->excludes(moist_opt);
    moist_opt->needs("--target");
    sweep->add_option("--algorithms", swp.algorithms, "comma list or 'all'");
    sweep->add_option("--budget-grid", swp.budget_grid,
                      "comma list of budgets (even ints or percentages)");
    sweep->add_option("--budget-count", swp.budget_count,
                      "evenly spaced grid size when --budget-grid is absent")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", swp.out, "CSV output file (default stdout)");
    sweep->add_option("--json-out", swp.json_out, "also write a JSON report here");
    sweep->add_flag("--no-timing", swp.no_timing, "omit the runtime column for stable output");
    sweep->add_option("--jobs", swp.jobs, "worker threads (default: OASP_JOBS or 1)")
        ->check(CLI::PositiveNumber);

    OracleArgs ora;
    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "compare the exact solver against exhaustive enumeration");
    oracle->add_option("--m-max", ora.m_max, "max rows of random instances");
    oracle->add_option("--n-max", ora.n_max, "max columns of random instances");
    oracle->add_option("--trials", ora.trials, "number of random instances");
    oracle->add_option("--seed", ora.seed, "RNG seed");

    InfoArgs inf;
    CLI::App* info = app.add_subcommand("info", "print instance facts and budget landmarks");
    info->add_option("--instance", inf.instance, "instance JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(generate)) return cmd_generate(gen);
        if (app.got_subcommand(solve)) return cmd_solve(sol);
        if (app.got_subcommand(sweep)) return cmd_sweep(swp);
        if (app.got_subcommand(oracle)) return cmd_oracle_check(ora);
        if (app.got_subcommand(info)) return cmd_info(inf);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const oasp::io_error& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << single_line(e.what()) << "\n";
        return 3;
    }
}
