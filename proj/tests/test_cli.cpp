#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "oasp_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_text(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

// Runs the tool through the shell, so tests can prefix environment variables.
Run cli(const std::string& args) {
    static int counter = 0;
    fs::path out_file = scratch() / ("stdout_" + std::to_string(counter) + ".txt");
    fs::path err_file = scratch() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = args + " >'" + out_file.string() + "' 2>'" + err_file.string() + "'";
    size_t at = cmd.find("@oasp");
    REQUIRE(at != std::string::npos);
    cmd.replace(at, 5, std::string("'") + OASP_CLI_PATH + "'");
    int rc = std::system(cmd.c_str());
    int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code, slurp(out_file), slurp(err_file)};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const char* kExample =
    R"({"m":4,"n":5,"rewards":[[0,3,1,4,1],[0,1,1,9,6],[0,2,8,9,9],[0,1,1,1,1]]})";

}  // namespace

TEST_CASE("cli rejects bad invocations up front") {
    REQUIRE(cli("@oasp").code == 1);
    REQUIRE(cli("@oasp frobnicate").code == 1);
    REQUIRE(cli("@oasp solve --budget 4").code == 1);  // missing --instance
    Run help = cli("@oasp --help");
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("generate") != std::string::npos);
    Run bad = cli("@oasp solve --instance x.json --budget 4 --bogus-flag");
    REQUIRE(bad.code == 1);
    REQUIRE(bad.err.rfind("error: ", 0) == 0);
}

TEST_CASE("generate writes numbered instances with metadata") {
    fs::path dir = scratch() / "gen_batch";
    fs::remove_all(dir);
    Run r = cli("@oasp generate --m 4 --n 6 --theta 0.9 --seed 5 --count 3 --out-dir '" +
                dir.string() + "'");
    REQUIRE(r.code == 0);
    REQUIRE(r.out == "wrote 3 instances to " + dir.string() + "\n");
    for (int k = 0; k < 3; ++k) {
        fs::path base = dir / ("instance_00" + std::to_string(k));
        json inst = json::parse(slurp(base.string() + ".json"));
        REQUIRE(inst["m"] == 4);
        REQUIRE(inst["n"] == 6);
        REQUIRE(inst["rewards"].size() == 4);
        json meta = json::parse(slurp(base.string() + ".meta.json"));
        REQUIRE(meta["theta"] == 0.9);
        REQUIRE(meta["seed"] == 5 + k);
        REQUIRE(meta["generator"].get<std::string>().find("mt19937_64") != std::string::npos);
    }

    fs::path dir2 = scratch() / "gen_batch_again";
    fs::remove_all(dir2);
    REQUIRE(cli("@oasp generate --m 4 --n 6 --theta 0.9 --seed 5 --count 3 --out-dir '" +
                dir2.string() + "'")
                .code == 0);
    REQUIRE(slurp(dir / "instance_002.json") == slurp(dir2 / "instance_002.json"));

    REQUIRE(cli("@oasp generate --m 0 --n 6 --theta 0 --out-dir '" + dir.string() + "'").code == 1);
    REQUIRE(cli("@oasp generate --m 2 --n 2 --theta -1 --out-dir '" + dir.string() + "'").code ==
            1);
}

TEST_CASE("solve prints one solution line per algorithm") {
    fs::path inst = write_text("example.json", std::string(kExample) + "\n");

    Run exact = cli("@oasp solve --instance '" + inst.string() + "' --budget 16 --algorithm optsa");
    REQUIRE(exact.code == 0);
    json j = json::parse(exact.out);
    REQUIRE(j["algorithm"] == "optsa");
    REQUIRE(j["budget"] == 16);
    REQUIRE(j["reward"] == 32);
    REQUIRE(j["cost"] == 16);
    REQUIRE(j["depths"] == json::array({3, 1, 5, 0}));
    REQUIRE_FALSE(j.contains("best_single"));

    Run ratio = cli("@oasp solve --instance '" + inst.string() + "' --budget 16 --algorithm apxmre");
    json r = json::parse(ratio.out);
    REQUIRE(r["reward"] == 25);
    REQUIRE(r["best_single"]["reward"] == 9);
    REQUIRE(r["best_single"]["cost"] == 8);
    REQUIRE(r["best_single"]["depths"] == json::array({1, 4, 0, 0}));

    Run brute = cli("@oasp solve --instance '" + inst.string() + "' --budget 16 --algorithm brute");
    REQUIRE(json::parse(brute.out)["reward"] == 32);

    Run all = cli("@oasp solve --instance '" + inst.string() + "' --budget 16");
    REQUIRE(all.code == 0);
    std::vector<std::string> lines = lines_of(all.out);
    REQUIRE(lines.size() == 5);
    const char* order[] = {"optsa", "gdyme", "gdymc", "apxmre", "apxmrc"};
    double rewards[] = {32, 30, 32, 25, 32};
    for (int k = 0; k < 5; ++k) {
        json line = json::parse(lines[k]);
        REQUIRE(line["algorithm"] == order[k]);
        REQUIRE(line["reward"] == rewards[k]);
    }

    fs::path out_file = scratch() / "solution.jsonl";
    Run to_file = cli("@oasp solve --instance '" + inst.string() +
                      "' --budget 16 --algorithm gdymc --out '" + out_file.string() + "'");
    REQUIRE(to_file.code == 0);
    REQUIRE(to_file.out.empty());
    REQUIRE(json::parse(slurp(out_file))["reward"] == 32);
}

TEST_CASE("solve validates budgets and inputs") {
    fs::path inst = write_text("example_b.json", std::string(kExample) + "\n");
    std::string base = "@oasp solve --instance '" + inst.string() + "'";

    Run pct = cli(base + " --budget 50%");
    REQUIRE(pct.code == 0);
    REQUIRE(json::parse(lines_of(pct.out)[0])["budget"] == 24);

    Run odd = cli(base + " --budget 15");
    REQUIRE(odd.code == 1);
    REQUIRE(odd.err.rfind("error: ", 0) == 0);
    REQUIRE(odd.err.find("even") != std::string::npos);

    REQUIRE(cli(base + " --budget 100").code == 1);
    REQUIRE(cli(base + " --budget 150%").code == 1);
    REQUIRE(cli(base + " --budget -4").code == 1);
    REQUIRE(cli(base + " --budget xyz").code == 1);
    REQUIRE(cli(base + " --budget 16 --algorithm nope").code == 1);

    Run missing = cli("@oasp solve --instance '" + (scratch() / "nope.json").string() +
                      "' --budget 4");
    REQUIRE(missing.code == 2);
    REQUIRE(missing.err.rfind("error: ", 0) == 0);

    fs::path broken = write_text("broken.json", "{oops");
    Run malformed = cli("@oasp solve --instance '" + broken.string() + "' --budget 4");
    REQUIRE(malformed.code == 1);
    REQUIRE(malformed.err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("info reports the budget landmarks") {
    fs::path inst = write_text("example_c.json", std::string(kExample) + "\n");
    Run r = cli("@oasp info --instance '" + inst.string() + "'");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["m"] == 4);
    REQUIRE(j["n"] == 5);
    REQUIRE(j["total_reward"] == 58);
    REQUIRE(j["full_visit_budget"] == 38);
    REQUIRE(j["full_visit_budget_bound"] == 46);
    REQUIRE(j["sweep_budget_ceiling"] == 48);
}

TEST_CASE("sweep over a directory of instances") {
    fs::path dir = scratch() / "sweep_batch";
    fs::remove_all(dir);
    REQUIRE(cli("@oasp generate --m 3 --n 4 --theta 0 --seed 1 --count 2 --out-dir '" +
                dir.string() + "'")
                .code == 0);

    std::string base = "@oasp sweep --instances-dir '" + dir.string() + "'";
    Run r = cli(base + " --budget-grid 0,8,16 --no-timing");
    REQUIRE(r.code == 0);
    std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 2 * 3 * 5);
    REQUIRE(lines[0] == "instance_id,tag,m,n,budget,budget_pct,algorithm,reward,reward_pct,cost,rho");
    REQUIRE(lines[1].rfind("instance_000,theta=0,3,4,0,0,apxmrc,", 0) == 0);
    REQUIRE(lines.back().rfind("instance_001,theta=0,3,4,16,", 0) == 0);

    Run counted = cli(base + " --budget-count 5 --no-timing");
    REQUIRE(counted.code == 0);
    REQUIRE(lines_of(counted.out).size() == 1 + 2 * 5 * 5);

    Run timed = cli(base + " --budget-grid 8");
    REQUIRE(lines_of(timed.out)[0] ==
            "instance_id,tag,m,n,budget,budget_pct,algorithm,reward,reward_pct,cost,rho,runtime_ms");

    Run subset = cli(base + " --budget-grid 8 --algorithms gdyme,gdymc --no-timing");
    REQUIRE(subset.code == 0);
    std::vector<std::string> sub_lines = lines_of(subset.out);
    REQUIRE(sub_lines.size() == 1 + 2 * 2);
    // no exact solver in the set: the rho column is empty
    REQUIRE(sub_lines[1].back() == ',');

    Run pct_budget = cli(base + " --budget-grid 30% --no-timing");
    REQUIRE(pct_budget.code == 0);
    // 30% of the ceiling 30 is 9, floored to the even 8
    REQUIRE(lines_of(pct_budget.out)[1].rfind("instance_000,theta=0,3,4,8,", 0) == 0);

    fs::path csv_file = scratch() / "sweep.csv";
    fs::path json_file = scratch() / "sweep.json";
    Run to_files = cli(base + " --budget-grid 8 --no-timing --out '" + csv_file.string() +
                       "' --json-out '" + json_file.string() + "'");
    REQUIRE(to_files.code == 0);
    REQUIRE(to_files.out.empty());
    REQUIRE(lines_of(slurp(csv_file)).size() == 1 + 2 * 5);
    json doc = json::parse(slurp(json_file));
    REQUIRE(doc["rows"].size() == 2 * 5);
    REQUIRE(doc["aggregates"].size() == 5);
    REQUIRE(doc["rows"][0]["rho"].is_number());
}

TEST_CASE("sweep output is byte-stable across worker counts") {
    fs::path dir = scratch() / "sweep_jobs";
    fs::remove_all(dir);
    REQUIRE(cli("@oasp generate --m 5 --n 5 --theta 0.9 --seed 9 --count 3 --out-dir '" +
                dir.string() + "'")
                .code == 0);
    std::string base = "@oasp sweep --instances-dir '" + dir.string() +
                       "' --budget-count 8 --no-timing";
    Run serial = cli(base + " --jobs 1");
    Run parallel = cli(base + " --jobs 8");
    Run via_env = cli("OASP_JOBS=7 " + base);
    REQUIRE(serial.code == 0);
    REQUIRE(parallel.code == 0);
    REQUIRE(via_env.code == 0);
    REQUIRE(serial.out == parallel.out);
    REQUIRE(serial.out == via_env.out);

    REQUIRE(cli("OASP_JOBS=abc " + base).code == 1);
    REQUIRE(cli(base + " --jobs 0").code == 1);
}

TEST_CASE("sweep validates its inputs") {
    fs::path dir = scratch() / "sweep_bad";
    fs::remove_all(dir);
    fs::create_directories(dir);

    REQUIRE(cli("@oasp sweep --budget-grid 4").code == 1);  // no input source
    REQUIRE(cli("@oasp sweep --instances-dir '" + (scratch() / "no_dir").string() + "'").code == 2);
    Run empty = cli("@oasp sweep --instances-dir '" + dir.string() + "'");
    REQUIRE(empty.code == 1);
    REQUIRE(empty.err.find("no instance files") != std::string::npos);

    std::ofstream(dir / "a.json") << R"({"m":1,"n":2,"rewards":[[0,1]]})";
    std::ofstream(dir / "b.json") << R"({"m":2,"n":2,"rewards":[[0,1],[0,1]]})";
    Run mixed = cli("@oasp sweep --instances-dir '" + dir.string() + "' --budget-grid 4");
    REQUIRE(mixed.code == 1);
    REQUIRE(mixed.err.find("share dimensions") != std::string::npos);

    fs::remove(dir / "b.json");
    REQUIRE(cli("@oasp sweep --instances-dir '" + dir.string() + "' --budget-grid 5").code == 1);
    REQUIRE(cli("@oasp sweep --instances-dir '" + dir.string() +
                "' --budget-grid 4 --algorithms brute")
                .code == 1);
}

TEST_CASE("sweep can derive an instance from a moisture grid") {
    fs::path csv = write_text("field.csv", "5,1,9\n5,9,1\n");
    std::string base = "@oasp sweep --moisture '" + csv.string() + "' --target 5";

    Run r = cli(base + " --budget-grid 4 --no-timing");
    REQUIRE(r.code == 0);
    std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 5);
    REQUIRE(lines[1].rfind("field,moisture,2,3,4,", 0) == 0);

    Run t = cli(base + " --transpose --budget-grid 4 --no-timing");
    REQUIRE(t.code == 0);
    REQUIRE(lines_of(t.out)[1].rfind("field,moisture,3,2,4,", 0) == 0);

    REQUIRE(cli("@oasp sweep --moisture '" + csv.string() + "' --budget-grid 4").code == 1);
    REQUIRE(cli("@oasp sweep --transpose --instances-dir x").code == 1);
    REQUIRE(cli(base + " --instances-dir x --budget-grid 4").code == 1);
}

TEST_CASE("oracle check agrees with the solvers on random instances") {
    Run r = cli("@oasp oracle-check --m-max 3 --n-max 3 --trials 5 --seed 3");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("checked 5 instances") != std::string::npos);

    REQUIRE(cli("@oasp oracle-check --trials 0").code == 1);
    REQUIRE(cli("@oasp oracle-check --m-max 0").code == 1);
    REQUIRE(cli("@oasp oracle-check --m-max 40 --n-max 7").code == 1);
}
