#include "harness.hpp"

#include "ogflow/io.hpp"

#include <fstream>

namespace ogflow::harness {

using nlohmann::json;

ParticleEnsemble make_initial_ensemble(const ExperimentConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.sampler.n_particles);
  const std::uint64_t seed = derive_seed(cfg.sampler.seed, 1);
  if (cfg.init.kind == InitSpec::Kind::on_manifold) return synthetic_ground_truth(n, seed);
  return gaussian_cloud(cfg.init.center, cfg.init.scale, n, seed);
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  const TargetDensity target = synthetic_target();
  const ConstraintSpec constraint = synthetic_constraint();
  const EnergyDistanceReference reference(synthetic_ground_truth(
      static_cast<Eigen::Index>(cfg.ground_truth_n), cfg.ground_truth_seed));

  const SnapshotObserver observer = [&](std::size_t, const ParticleEnsemble& ensemble,
                                        std::vector<std::pair<std::string, double>>& out) {
    out.emplace_back("energy_distance", reference.distance_to(ensemble));
  };
  return run_sampler(cfg.sampler, target, constraint, make_initial_ensemble(cfg), observer);
}

json run_metadata(const ExperimentConfig& cfg, const RunRecord& record) {
  const SamplerConfig& s = record.config;
  json series = json::object();
  for (const auto& m : record.metric_series) {
    json points = json::array();
    for (const auto& [iteration, value] : m.values) points.push_back({iteration, value});
    series[m.name] = points;
  }
  return {
      {"method", std::string(method_name(s.method))},
      {"eta", s.eta},
      {"alpha", s.psi.alpha},
      {"beta", s.psi.beta},
      {"n_particles", s.n_particles},
      {"n_iters", s.n_iters},
      {"seed", s.seed},
      {"rng_algorithm", std::string(kRngAlgorithm)},
      {"wall_time_s", record.wall_time},
      {"warnings", record.warnings},
      {"config", to_json(cfg)},
      {"metric_series", series},
  };
}

void write_run_outputs(const ExperimentConfig& cfg, const RunRecord& record) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw io::IoError("cannot create output directory " + cfg.output_dir.string());

  io::write_samples_csv(cfg.output_dir / "samples.csv", record.final_samples());
  io::write_metrics_csv(cfg.output_dir / "metrics.csv", record.metric_series);

  std::ofstream meta(cfg.output_dir / "run.json", std::ios::binary);
  if (!meta) throw io::IoError("cannot write " + (cfg.output_dir / "run.json").string());
  meta << run_metadata(cfg, record).dump(2) << '\n';
}

}  // namespace ogflow::harness
