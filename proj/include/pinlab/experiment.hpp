#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinlab/environment.hpp"

namespace pinlab {

enum class ExperimentKind { free_energy_sweep, critical_point, env_diagnostics, orthant, bound_check, criterion, reproduce };
std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Thrown for malformed or inconsistent configs; maps to exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One JSON document. Grids are explicit lists. Which keys are allowed depends on the kind.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::free_energy_sweep;
    double alpha = 0.5;
    /// Renewal table length; defaults to the largest N.
    std::optional<std::size_t> n_max;
    std::vector<GeneratorSpec> generators;
    std::vector<double> beta;
    std::vector<double> h;
    std::vector<double> u;
    std::vector<std::size_t> N;
    std::size_t samples = 0;
    /// Diagnostic or orthant sizes.
    std::vector<std::size_t> n;
    /// bound-check only: "smoothing", "lower" or "upper".
    std::string bound;
    double band_z = 1.0;
    /// reproduce only.
    std::string claim;
    std::uint64_t seed = 1;
    std::string out;
};

/// Throws ConfigError on unknown or missing keys and on invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_config = 3 };

struct RunOptions {
    unsigned workers = 1;
    /// Overrides config.seed / config.out when set.
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

/// Writes manifest.json, results.csv and summary.txt into the output directory.
int run(ExperimentConfig config, const RunOptions& opts);

}  // namespace pinlab
