#pragma once

#include "sspac/io.hpp"
#include "sspac/mdp.hpp"
#include "sspac/pac.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sspac {

/// Which environment to build. Fields not used by the family are ignored.
struct EnvironmentSpec {
    std::string family = "chain"; // random | chain | gridworld | file
    std::size_t states = 3;
    std::size_t actions = 2;
    std::size_t support = 2;
    double c_min = 0.1;
    std::uint64_t seed = 0;
    std::size_t length = 2;
    double slip = 0.0;
    double cost = 1.0;
    std::size_t width = 3;
    std::size_t height = 3;
    std::string path;

    bool operator==(const EnvironmentSpec&) const = default;
};

SspMdp make_environment(const EnvironmentSpec& spec);

enum class Algorithm { Exact, PacPositive, PacRestricted, EstimateDiameter };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct ExperimentConfig {
    EnvironmentSpec environment;
    Algorithm algorithm = Algorithm::PacPositive;
    PacConfig pac;
    std::size_t replications = 1;
    /// Replication r uses generator seed `seed + r`.
    std::uint64_t seed = 0;
    /// Output stem: writes <output>.json and <output>.csv. Empty means no files.
    std::string output;
};

json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const json& j);

struct ReplicationRow {
    std::uint64_t seed = 0;
    std::uint64_t calls = 0;
    double sup_error = 0.0;
    bool success = false;
    double delta_terminal = 0.0;
    std::optional<double> d_hat;
};

struct ExperimentResult {
    std::vector<ReplicationRow> rows;
    std::vector<PacRunLog> logs;
    /// Reference value the error is measured against (V*, V_theta*, or D for the diameter).
    ValueVector target;
    double success_rate = 0.0;
};

inline constexpr const char* kCsvHeader = "seed,calls,sup_error,success,delta_terminal,d_hat";

/// Runs every replication of the configured algorithm and, when cfg.output is set,
/// writes the JSON summary and the CSV table. Sub-module errors are rethrown with the failing seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<ReplicationRow>& rows);
json result_to_json(const ExperimentConfig& cfg, const ExperimentResult& result);

struct BenchGrid {
    EnvironmentSpec environment;
    PacConfig pac;
    std::vector<double> epsilons;
    /// Optional cost floors; applied as the chain cost or the random family's c_min.
    std::vector<double> c_mins;
    std::uint64_t seed = 0;
};

struct BenchRow {
    double epsilon = 0.0;
    double c_min = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t calls = 0;
    double final_delta = 0.0;
};

inline constexpr const char* kBenchCsvHeader = "epsilon,c_min,seed,calls,final_delta";

/// Generator calls of the positive-cost planner for every (epsilon, c_min) cell.
std::vector<BenchRow> bench_scaling(const BenchGrid& grid);
std::string bench_to_csv(const std::vector<BenchRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sspac
