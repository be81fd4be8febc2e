#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "truncvine/dataset.hpp"
#include "truncvine/scoring.hpp"
#include "truncvine/vine_matrix.hpp"

namespace truncvine {

struct RunConfig {
    std::filesystem::path input;
    std::vector<std::string> drop_columns;
    std::optional<int> t_min; // default min(3, t_max)
    std::optional<int> t_max; // default min(n, 20)
    std::uint64_t seed = 0;
    std::size_t k_neighbors = 5;
    PobsDivisor pobs_divisor = PobsDivisor::m;
    Orientation orientation = Orientation::paper;
    std::filesystem::path out_dir = "truncvine_out";
    std::uint64_t memory_budget = 50'000'000; // grid points
    char delimiter = ',';
};

enum class FailureKind { none, data, resource };

struct LevelRecord {
    int t = 0;
    FailureKind failure = FailureKind::none;
    std::string error;
    double weight = 0.0;        // recomputed from the order-t clusters
    double greedy_weight = 0.0; // accumulated by the builder
    double wall_time_s = 0.0;
    std::string matrix_path, structure_path, score_path; // relative to out_dir
};

struct RunReport {
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    int t_min = 0, t_max = 0;
    std::string config_hash;
    std::vector<std::string> column_names;
    std::vector<LevelRecord> levels;

    /// 0 when every level succeeded, else 3 if any level hit the memory budget, else 2.
    int exit_code() const;
    nlohmann::json to_json() const;
};

/// FNV-1a over the result-relevant config fields (output directory excluded).
std::string config_hash(const RunConfig& config);

/// Loads data first (any error propagates before anything is written), then builds,
/// encodes and scores each level in [t_min, t_max]. Level failures are recorded, not thrown.
RunReport run_truncopt(const RunConfig& config);

struct ScoreConfig {
    RunConfig data;
    std::filesystem::path matrix;
    std::optional<int> t; // default: matrix truncation level
};

/// Scores a matrix file against the data with the same estimator settings `fit` uses at level t.
TruncatedVineScore score_matrix_file(const ScoreConfig& config);

} // namespace truncvine
