#pragma once

// Experiment orchestration behind the `ogflow` command-line tool. Every
// command is a function returning a process exit code so it can be driven
// from tests without spawning processes.

#include "ogflow/samplers.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ogflow::harness {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct InitSpec {
  enum class Kind { on_manifold, off_manifold };
  Kind kind = Kind::on_manifold;
  Vector center = Vector::Constant(2, 1.5);
  double scale = 0.1;
};

struct ExperimentConfig {
  std::string target = "synthetic";
  SamplerConfig sampler;
  InitSpec init;
  std::size_t ground_truth_n = 2000;
  std::uint64_t ground_truth_seed = 0;
  std::filesystem::path output_dir = "run";
};

/// Strict parse: unknown keys, a wrong schema_version, or out-of-range values
/// raise ConfigError. Missing optional keys take the documented defaults.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully resolved config, as written into run.json.
nlohmann::json to_json(const ExperimentConfig& cfg);

ParticleEnsemble make_initial_ensemble(const ExperimentConfig& cfg);

/// Runs the sampler, adding an "energy_distance" series against a
/// ground_truth_n-point reference set.
RunRecord run_experiment(const ExperimentConfig& cfg);

nlohmann::json run_metadata(const ExperimentConfig& cfg, const RunRecord& record);

/// Writes samples.csv, metrics.csv and run.json into cfg.output_dir.
void write_run_outputs(const ExperimentConfig& cfg, const RunRecord& record);

struct VerifyOptions {
  std::size_t n_points = 1000;
  std::size_t n_fd_points = 200;
  std::uint64_t seed = 2024;
  /// Fault injection: flip the sign of r before checking the trace identity.
  bool negate_correction = false;
  /// Fault injection: also evaluate at a critical point of a constraint.
  bool inject_critical_point = false;
};

struct VerifyCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

std::vector<VerifyCheck> run_verify_suite(const VerifyOptions& opts);

int cli_run(const std::filesystem::path& config_path,
            const std::optional<std::filesystem::path>& output_override,
            std::ostream& out, std::ostream& err);
int cli_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cli_metrics(const std::filesystem::path& samples_a,
                const std::filesystem::path& samples_b,
                const std::optional<std::string>& constraint, std::ostream& out,
                std::ostream& err);
int cli_groundtruth(long long n, std::uint64_t seed, const std::filesystem::path& out_path,
                    std::ostream& out, std::ostream& err);

}  // namespace ogflow::harness
