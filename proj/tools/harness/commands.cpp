#include "harness.hpp"

#include "ogflow/io.hpp"

#include <cstdio>
#include <ostream>

namespace ogflow::harness {

using nlohmann::json;

int cli_run(const std::filesystem::path& config_path,
            const std::optional<std::filesystem::path>& output_override, std::ostream& out,
            std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (output_override) cfg.output_dir = *output_override;

  RunRecord record;
  try {
    record = run_experiment(cfg);
  } catch (const Error& e) {
    err << "sampler error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  for (const auto& w : record.warnings) err << "warning: " << w << '\n';

  try {
    write_run_outputs(cfg, record);
  } catch (const io::IoError& e) {
    err << "output error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto& ed = record.series("energy_distance");
  const auto& mae_series = record.series("mae");
  out << method_name(cfg.sampler.method) << ": " << cfg.sampler.n_iters << " iterations in "
      << record.wall_time << " s, final mae " << mae_series.values.back().second
      << ", energy distance " << ed.values.back().second << '\n'
      << "wrote " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

int cli_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<VerifyCheck> checks;
  try {
    checks = run_verify_suite(opts);
  } catch (const Error& e) {
    err << "verify aborted: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  int failed = 0;
  for (const auto& c : checks) {
    char line[64];
    std::snprintf(line, sizeof line, "%-5s max %.3e  tol %.1e  ", c.passed ? "PASS" : "FAIL",
                  c.max_residual, c.tolerance);
    out << line << c.name;
    if (!c.note.empty()) out << "  (" << c.note << ')';
    out << '\n';
    if (!c.passed) {
      ++failed;
      err << "failed: " << c.name << ", max residual " << c.max_residual;
      if (!c.note.empty()) err << ", " << c.note;
      err << '\n';
    }
  }
  out << (checks.size() - failed) << '/' << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cli_metrics(const std::filesystem::path& samples_a, const std::filesystem::path& samples_b,
                const std::optional<std::string>& constraint, std::ostream& out,
                std::ostream& err) {
  if (constraint && *constraint != "synthetic") {
    err << "unknown constraint '" << *constraint << "'\n";
    return kExitConfigError;
  }
  try {
    const ParticleEnsemble a = io::read_samples_csv(samples_a);
    const ParticleEnsemble b = io::read_samples_csv(samples_b);
    json doc = {{"energy_distance", energy_distance(a, b)},
                {"n_a", a.size()},
                {"n_b", b.size()},
                {"dim", a.dim()}};
    if (constraint) {
      const ConstraintSpec c = synthetic_constraint();
      if (a.dim() != 2) throw DimensionMismatch("the synthetic constraint is two-dimensional");
      doc["mae_a"] = mae(a, c);
      doc["mae_b"] = mae(b, c);
    }
    out << doc.dump(2) << '\n';
  } catch (const Error& e) {
    err << "metrics error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

int cli_groundtruth(long long n, std::uint64_t seed, const std::filesystem::path& out_path,
                    std::ostream& out, std::ostream& err) {
  if (n < 1) {
    err << "--n must be positive\n";
    return kExitConfigError;
  }
  try {
    io::write_samples_csv(out_path, synthetic_ground_truth(static_cast<Eigen::Index>(n), seed));
  } catch (const Error& e) {
    err << "groundtruth error: " << e.what() << '\n';
    return kExitConfigError;
  }
  out << "wrote " << n << " samples to " << out_path.string() << '\n';
  return kExitOk;
}

}  // namespace ogflow::harness
