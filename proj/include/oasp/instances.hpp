#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "oasp/aisle_graph.hpp"
#include "oasp/format.hpp"

// Instance sources: synthetic Zipf-distributed reward grids, reward grids
// derived from moisture measurements, and the JSON on-disk format.

namespace oasp {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Synthetic instances
// ---------------------------------------------------------------------------

struct ZipfConfig {
    double theta = 0.0;    // skew; 0 is uniform
    int max_reward = 100;  // values drawn from {0, .., max_reward-1}
    std::uint64_t seed = 0;
};

// Recorded in instance metadata. std::discrete_distribution is not pinned
// down across standard libraries, so the draw is spelled out: mt19937_64
// seeded directly, 53-bit uniforms, inverse CDF over weights (k+1)^-theta,
// cells drawn row-major for columns >= 2.
constexpr const char* kZipfGeneratorId =
    "mt19937_64;u53=(x>>11)*2^-53;invcdf[(k+1)^-theta];row-major j>=2";

// Rewards drawn i.i.d. with P(reward = k) proportional to 1/(k+1)^theta,
// column 1 fixed at 0. Deterministic in the seed, bit-for-bit across builds.
inline AisleGraph generate_zipf(int m, int n, const ZipfConfig& cfg) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("instance dimensions must be at least 1x1, got " +
                                    std::to_string(m) + "x" + std::to_string(n));
    if (!std::isfinite(cfg.theta) || cfg.theta < 0.0)
        throw std::invalid_argument("theta must be finite and >= 0");
    if (cfg.max_reward < 1) throw std::invalid_argument("max_reward must be >= 1");

    std::vector<double> cum(cfg.max_reward);
    double total = 0.0;
    for (int k = 0; k < cfg.max_reward; ++k) {
        total += std::pow(k + 1.0, -cfg.theta);
        cum[k] = total;
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<double>> grid(m, std::vector<double>(n, 0.0));
    for (int i = 1; i <= m; ++i)
        for (int j = 2; j <= n; ++j) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            auto it = std::upper_bound(cum.begin(), cum.end(), u * total);
            int k = static_cast<int>(it - cum.begin());
            grid[i - 1][j - 1] = std::min(k, cfg.max_reward - 1);
        }
    return AisleGraph(m, n, grid);
}

struct GeneratorMetadata {
    double theta = 0.0;
    std::uint64_t seed = 0;
    std::string generator;
};

// ---------------------------------------------------------------------------
// Moisture-derived instances
// ---------------------------------------------------------------------------

struct MoistureMap {
    std::vector<std::vector<double>> values;  // one row per aisle
    double target = 0.0;                      // desired moisture level
};

inline MoistureMap transpose(const MoistureMap& map) {
    MoistureMap out;
    out.target = map.target;
    if (map.values.empty()) return out;
    size_t rows = map.values.size(), cols = map.values[0].size();
    out.values.assign(cols, std::vector<double>(rows, 0.0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) out.values[j][i] = map.values[i][j];
    return out;
}

// Reward of a cell is how far its moisture sits from the target; the
// interconnect column is zeroed like everywhere else.
inline AisleGraph from_moisture(const MoistureMap& map) {
    if (map.values.empty() || map.values[0].empty())
        throw std::invalid_argument("moisture grid is empty");
    if (!std::isfinite(map.target))
        throw std::invalid_argument("moisture target must be finite");
    int m = static_cast<int>(map.values.size());
    int n = static_cast<int>(map.values[0].size());
    std::vector<std::vector<double>> grid(m, std::vector<double>(n, 0.0));
    for (int i = 1; i <= m; ++i) {
        const auto& row = map.values[i - 1];
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("moisture row " + std::to_string(i) + " has " +
                                        std::to_string(row.size()) + " columns, expected " +
                                        std::to_string(n));
        for (int j = 2; j <= n; ++j) {
            if (!std::isfinite(row[j - 1]))
                throw std::invalid_argument("moisture value at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") is not finite");
            grid[i - 1][j - 1] = std::abs(map.target - row[j - 1]);
        }
    }
    return AisleGraph(m, n, grid);
}

// Plain numeric CSV, no header, one line per aisle.
inline MoistureMap read_moisture_csv(const std::filesystem::path& path, double target) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open moisture file " + path.string());
    MoistureMap map;
    map.target = target;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            size_t a = cell.find_first_not_of(" \t");
            size_t b = cell.find_last_not_of(" \t");
            if (a == std::string::npos)
                throw std::invalid_argument("empty field on line " + std::to_string(lineno) +
                                            " of " + path.string());
            cell = cell.substr(a, b - a + 1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw std::invalid_argument("bad number '" + cell + "' on line " +
                                            std::to_string(lineno) + " of " + path.string());
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!map.values.empty() && row.size() != map.values[0].size())
            throw std::invalid_argument("line " + std::to_string(lineno) + " of " + path.string() +
                                        " has " + std::to_string(row.size()) + " fields, expected " +
                                        std::to_string(map.values[0].size()));
        map.values.push_back(std::move(row));
    }
    if (map.values.empty()) throw std::invalid_argument("moisture file " + path.string() + " is empty");
    return map;
}

// ---------------------------------------------------------------------------
// Instance JSON: {"m": int, "n": int, "rewards": [[row-major grid]]}
// ---------------------------------------------------------------------------

inline nlohmann::json instance_to_json(const AisleGraph& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 1; i <= g.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 1; j <= g.cols(); ++j) row.push_back(detail::json_number(g.reward(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"m", g.rows()}, {"n", g.cols()}, {"rewards", std::move(rows)}};
}

inline AisleGraph instance_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j.contains("rewards"))
        throw std::invalid_argument("instance JSON must be an object with m, n and rewards");
    if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
        throw std::invalid_argument("instance m and n must be integers");
    int m = j["m"].get<int>(), n = j["n"].get<int>();
    if (!j["rewards"].is_array() || static_cast<int>(j["rewards"].size()) != m)
        throw std::invalid_argument("rewards must be an array of " + std::to_string(m) + " rows");
    std::vector<std::vector<double>> grid;
    grid.reserve(m);
    for (const auto& row : j["rewards"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::invalid_argument("each rewards row must have " + std::to_string(n) +
                                        " entries");
        std::vector<double> r;
        r.reserve(n);
        for (const auto& v : row) {
            if (!v.is_number()) throw std::invalid_argument("rewards must be numbers");
            r.push_back(v.get<double>());
        }
        grid.push_back(std::move(r));
    }
    return AisleGraph(m, n, grid);
}

inline AisleGraph read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open instance file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

inline void write_instance(const AisleGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write instance file " + path.string());
    out << instance_to_json(g).dump() << "\n";
    if (!out) throw io_error("failed writing instance file " + path.string());
}

inline void write_metadata(const GeneratorMetadata& meta, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write metadata file " + path.string());
    nlohmann::json j = {{"generator", meta.generator},
                        {"seed", meta.seed},
                        {"theta", detail::json_number(meta.theta)}};
    out << j.dump() << "\n";
    if (!out) throw io_error("failed writing metadata file " + path.string());
}

inline std::optional<GeneratorMetadata> read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
    }
    GeneratorMetadata meta;
    if (j.contains("theta")) meta.theta = j["theta"].get<double>();
    if (j.contains("seed")) meta.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("generator")) meta.generator = j["generator"].get<std::string>();
    return meta;
}

}  // namespace oasp
