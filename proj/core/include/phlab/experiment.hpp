#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phlab/analysis.hpp"
#include "phlab/su_path.hpp"

namespace phlab {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Invalid or ill-typed configuration text; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Filesystem failure reading configs or writing results; exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;
    std::string model = "cat_suspension";
    TimeChange tau = TimeChange::constant(1.0);
    std::uint64_t seed = 1;
    double tol = 1e-8;
    double t_max = 10.0;
    int samples = 100;
    std::string out = "out";
};

/// Strict parse of the JSON config: unknown keys anywhere fail with the
/// offending key named; type and range violations throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// One asserted bound of an experiment. The name states the comparison;
/// pass of the whole run is the conjunction of the satisfied flags.
struct MetricRow {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};

struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
    std::string experiment;
    bool pass = false;
    std::vector<MetricRow> metrics;
    DataTable data;
};

/// Executes the named experiment. Deterministic for fixed (config, seed):
/// sampling order is specified and reductions are fixed-order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct ExperimentInfo {
    std::string_view name;
    std::string_view summary;
    std::string_view fields;  // config fields the experiment reads
};
/// All experiments in alphabetical order.
std::vector<ExperimentInfo> list_experiments();

/// CSV with shortest round-trip decimal formatting, LF line endings.
std::string format_csv(const DataTable& table);
/// Certificate as structured JSON text (stable key order, two-space indent).
std::string format_certificate(const ExperimentResult& res, const ExperimentConfig& cfg);
/// FNV-1a hash of the canonical config dump; the output path is excluded
/// so relocating results does not change the run identity.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Writes <out>/data.csv and <out>/certificate.json; throws IoError.
void write_outputs(const ExperimentResult& res, const ExperimentConfig& cfg);

}  // namespace phlab
