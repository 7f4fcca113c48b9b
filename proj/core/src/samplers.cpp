#include "ogflow/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace ogflow {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::langevin: return "langevin";
    case Method::o_langevin: return "o_langevin";
    case Method::svgd: return "svgd";
    case Method::o_svgd: return "o_svgd";
    case Method::annealed_mh: return "annealed_mh";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::langevin, Method::o_langevin, Method::svgd, Method::o_svgd,
                   Method::annealed_mh}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidArgument("unknown sampler method '" + std::string(name) + "'");
}

void AnnealingConfig::validate() const {
  if (eta_schedule.empty()) throw BadSchedule("annealing: empty temperature schedule");
  for (std::size_t k = 0; k < eta_schedule.size(); ++k) {
    if (!(eta_schedule[k] > 0.0) || !std::isfinite(eta_schedule[k])) {
      throw BadSchedule("annealing: temperatures must be positive and finite");
    }
    if (k > 0 && !(eta_schedule[k] < eta_schedule[k - 1])) {
      throw BadSchedule("annealing: temperatures must be strictly decreasing");
    }
  }
  if (!(normal_scale > 0.0) || !(tangential_scale > 0.0)) {
    throw InvalidArgument("annealing: proposal scales must be positive");
  }
}

std::vector<std::string> SamplerConfig::validate() const {
  std::vector<std::string> warnings;
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw NonPositiveEta("sampler: step size eta must be positive");
  }
  psi.validate();
  if (n_particles < 1) throw InvalidArgument("sampler: n_particles must be at least 1");
  if (record_every < 1) throw InvalidArgument("sampler: record_every must be at least 1");
  if (kernel.policy == KernelSpec::Bandwidth::fixed && !(kernel.fixed_h > 0.0)) {
    throw NonPositiveBandwidth("sampler: fixed bandwidth must be positive");
  }
  if (method == Method::annealed_mh) annealing.validate();

  const bool drifts = method == Method::o_langevin || method == Method::o_svgd;
  if (drifts && psi.beta == 0.0) {
    const double gain = eta * psi.alpha;
    std::ostringstream msg;
    msg << "eta * alpha = " << gain;
    if (gain > 2.0) {
      throw UnstableStepSize(msg.str() + " > 2: the linear g-recursion diverges");
    }
    if (gain > 1.0) {
      warnings.push_back(msg.str() + " > 1: the g-recursion overshoots and oscillates");
    }
  }
  return warnings;
}

const MetricSeries& RunRecord::series(std::string_view name) const {
  for (const auto& s : metric_series) {
    if (s.name == name) return s;
  }
  throw InvalidArgument("run record has no metric series '" + std::string(name) + "'");
}

Vector langevin_step(const Vector& x, const TargetDensity& target, double eta,
                     const Vector& noise) {
  return x + eta * target.score(x) + std::sqrt(2.0 * eta) * noise;
}

namespace {

Vector o_langevin_drift_from(const PointGeometry& geo, const Vector& score,
                             const PsiParams& psi_params, bool second_order_free) {
  Vector drift = (-psi(geo.value, psi_params) / geo.grad_norm_sq) * geo.gradient +
                 geo.projection * score;
  if (!second_order_free) drift += geo.correction;
  return drift;
}

}  // namespace

Vector o_langevin_drift(const Vector& x, const TargetDensity& target,
                        const ConstraintSpec& c, const PsiParams& psi,
                        bool second_order_free) {
  const PointGeometry geo = evaluate_geometry(x, c, !second_order_free);
  return o_langevin_drift_from(geo, target.score(x), psi, second_order_free);
}

Vector o_langevin_step(const Vector& x, const TargetDensity& target,
                       const ConstraintSpec& c, const SamplerConfig& cfg,
                       const Vector& noise) {
  const PointGeometry geo = evaluate_geometry(x, c, !cfg.second_order_free);
  const Vector drift =
      o_langevin_drift_from(geo, target.score(x), cfg.psi, cfg.second_order_free);
  return x + cfg.eta * drift + std::sqrt(2.0 * cfg.eta) * (geo.projection * noise);
}

double ensemble_bandwidth(const ParticleEnsemble& ensemble, const KernelSpec& kernel) {
  if (ensemble.size() == 1 && kernel.policy == KernelSpec::Bandwidth::median_heuristic) {
    return 1.0;
  }
  return kernel.bandwidth_for(ensemble);
}

Matrix svgd_velocity(const ParticleEnsemble& ensemble, const TargetDensity& target,
                     double h) {
  if (!(h > 0.0)) throw NonPositiveBandwidth("svgd: bandwidth must be positive");
  const Eigen::Index n = ensemble.size();
  const Matrix& x = ensemble.points();

  Matrix scores(n, ensemble.dim());
  for (Eigen::Index j = 0; j < n; ++j) scores.row(j) = target.score(ensemble.particle(j));

  Matrix velocity = Matrix::Zero(n, ensemble.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto diff = x.row(i) - x.row(j);
      const double k = std::exp(-diff.squaredNorm() / h);
      velocity.row(i) += k * scores.row(j) + (2.0 * k / h) * diff;
    }
  }
  velocity /= static_cast<double>(n);
  return velocity;
}

ParticleEnsemble svgd_step(const ParticleEnsemble& ensemble, const TargetDensity& target,
                           double eta, const KernelSpec& kernel) {
  if (eta < 0.0) throw NonPositiveEta("svgd: step size must be nonnegative");
  const double h = ensemble_bandwidth(ensemble, kernel);
  Matrix next = ensemble.points() + eta * svgd_velocity(ensemble, target, h);
  return ParticleEnsemble(std::move(next));
}

Matrix o_svgd_velocity(const ParticleEnsemble& ensemble, const TargetDensity& target,
                       const ConstraintSpec& c, const PsiParams& psi_params, double h,
                       bool second_order_free) {
  if (!(h > 0.0)) throw NonPositiveBandwidth("o_svgd: bandwidth must be positive");
  const Eigen::Index n = ensemble.size();
  const Eigen::Index d = ensemble.dim();
  const Matrix& x = ensemble.points();

  std::vector<PointGeometry> geo;
  geo.reserve(static_cast<std::size_t>(n));
  // Per particle j: D_j s_j, plus r_j for the full variant.
  Matrix attract(n, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector xj = ensemble.particle(j);
    geo.push_back(evaluate_geometry(xj, c, !second_order_free));
    const PointGeometry& gj = geo.back();
    Vector a = gj.projection * target.score(xj);
    if (!second_order_free) a += gj.correction;
    attract.row(j) = a.transpose();
  }

  Matrix velocity(n, d);
  Vector sum(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    sum.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector diff = (x.row(i) - x.row(j)).transpose();
      const double k = std::exp(-diff.squaredNorm() / h);
      // k D_j s_j + k r_j + D_j grad_y k
      sum += k * attract.row(j).transpose() +
             geo[static_cast<std::size_t>(j)].projection * ((2.0 * k / h) * diff);
    }
    const PointGeometry& gi = geo[static_cast<std::size_t>(i)];
    const Vector sharp = (-psi(gi.value, psi_params) / gi.grad_norm_sq) * gi.gradient;
    velocity.row(i) = (sharp + gi.projection * (sum / static_cast<double>(n))).transpose();
  }
  return velocity;
}

ParticleEnsemble o_svgd_step(const ParticleEnsemble& ensemble, const TargetDensity& target,
                             const ConstraintSpec& c, const SamplerConfig& cfg) {
  if (cfg.eta < 0.0) throw NonPositiveEta("o_svgd: step size must be nonnegative");
  const double h = ensemble_bandwidth(ensemble, cfg.kernel);
  Matrix next = ensemble.points() +
                cfg.eta * o_svgd_velocity(ensemble, target, c, cfg.psi, h,
                                          cfg.second_order_free);
  return ParticleEnsemble(std::move(next));
}

AnnealedMetropolis::AnnealedMetropolis(TargetDensity target, ConstraintSpec constraint,
                                       AnnealingConfig config)
    : target_(std::move(target)),
      constraint_(std::move(constraint)),
      config_(std::move(config)) {
  config_.validate();
}

double AnnealedMetropolis::normal_sd(double eta) const {
  // Above eta = 1 the tempered penalty is weaker than the base density, so
  // the normal step stops growing with the temperature.
  return config_.normal_scale * std::sqrt(std::min(eta, 1.0));
}

Vector AnnealedMetropolis::propose(const Vector& x, double eta, RandomStream& rng) const {
  const Vector grad = constraint_.gradient(x);
  const double norm_sq = grad.squaredNorm();
  const Vector xi = rng.normal_vector(x.size());
  if (!(norm_sq >= constraint_.grad_floor * constraint_.grad_floor) || norm_sq == 0.0) {
    // No normal direction: fall back to an isotropic tangential-scale move.
    return x + config_.tangential_scale * xi;
  }
  const Vector unit = grad / std::sqrt(norm_sq);
  const double along = unit.dot(xi);
  const Vector tangential = xi - along * unit;
  return x + config_.tangential_scale * tangential +
         (normal_sd(eta) * along) * unit;
}

double AnnealedMetropolis::proposal_quadratic(const Vector& at, const Vector& delta,
                                              double eta) const {
  const Vector grad = constraint_.gradient(at);
  const double norm_sq = grad.squaredNorm();
  const double tau_sq = config_.tangential_scale * config_.tangential_scale;
  if (!(norm_sq >= constraint_.grad_floor * constraint_.grad_floor) || norm_sq == 0.0) {
    return delta.squaredNorm() / tau_sq;
  }
  const double along = grad.dot(delta) / std::sqrt(norm_sq);
  const double sigma_sq = normal_sd(eta) * normal_sd(eta);
  return (delta.squaredNorm() - along * along) / tau_sq + along * along / sigma_sq;
}

double AnnealedMetropolis::log_acceptance(const Vector& current, const Vector& proposal,
                                          double eta) const {
  const TemperedTarget tempered(target_, constraint_, eta, config_.level);
  const double log_ratio = tempered.log_density(proposal) - tempered.log_density(current);
  const Vector delta = proposal - current;
  // log q(current | proposal) - log q(proposal | current)
  const double hastings = 0.5 * (proposal_quadratic(current, delta, eta) -
                                 proposal_quadratic(proposal, delta, eta));
  const double out = log_ratio + hastings;
  return std::isnan(out) ? -std::numeric_limits<double>::infinity() : out;
}

std::size_t AnnealedMetropolis::sweep(ParticleEnsemble& chains, double eta,
                                      RandomStream& rng) const {
  std::size_t accepted = 0;
  Matrix& pts = chains.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Vector current = pts.row(i).transpose();
    const Vector proposal = propose(current, eta, rng);
    const double log_u = std::log(rng.uniform());
    if (log_u < log_acceptance(current, proposal, eta)) {
      pts.row(i) = proposal.transpose();
      ++accepted;
    }
  }
  return accepted;
}

ParticleEnsemble annealed_mh_reference(const TargetDensity& target,
                                       const ConstraintSpec& c, double z,
                                       const std::vector<double>& eta_schedule,
                                       std::size_t steps_per_eta, std::size_t n_chains,
                                       std::uint64_t seed) {
  if (n_chains < 1) throw InvalidArgument("annealed MH: n_chains must be at least 1");
  if (steps_per_eta < 1) throw InvalidArgument("annealed MH: steps_per_eta must be at least 1");
  AnnealingConfig cfg;
  cfg.eta_schedule = eta_schedule;
  cfg.level = z;
  const AnnealedMetropolis sampler(target, c, cfg);

  RandomStream rng(seed);
  Matrix start(static_cast<Eigen::Index>(n_chains), target.dim);
  for (Eigen::Index i = 0; i < start.rows(); ++i) {
    start.row(i) = rng.normal_vector(target.dim).transpose();
  }
  ParticleEnsemble chains(std::move(start));
  for (double eta : eta_schedule) {
    for (std::size_t s = 0; s < steps_per_eta; ++s) sampler.sweep(chains, eta, rng);
  }
  return chains;
}

namespace {

struct Recorder {
  RunRecord& record;
  const ConstraintSpec& constraint;
  const SnapshotObserver& observer;

  void snapshot(std::size_t iteration, const ParticleEnsemble& ensemble) {
    record.snapshots.push_back({iteration, ensemble});
    std::vector<std::pair<std::string, double>> values{
        {"mae", mae(ensemble, constraint)},
        {"max_abs_g", max_abs_constraint(ensemble, constraint)},
    };
    if (observer) observer(iteration, ensemble, values);
    for (const auto& [name, value] : values) series(name).append(iteration, value);
  }

  MetricSeries& series(const std::string& name) {
    for (auto& s : record.metric_series) {
      if (s.name == name) return s;
    }
    record.metric_series.push_back({name, {}});
    return record.metric_series.back();
  }
};

class Stepper {
 public:
  Stepper(const SamplerConfig& cfg, const TargetDensity& target, const ConstraintSpec& c)
      : cfg_(cfg), target_(target), constraint_(c), rng_(cfg.seed) {
    if (cfg.method == Method::annealed_mh) {
      mh_.emplace(target, c, cfg.annealing);
    }
  }

  // Advances `ensemble` to iteration `t` (1-based).
  void step(ParticleEnsemble& ensemble, std::size_t t) {
    switch (cfg_.method) {
      case Method::langevin:
      case Method::o_langevin:
        step_chains(ensemble);
        break;
      case Method::svgd:
        ensemble = svgd_step(ensemble, target_, cfg_.eta, cfg_.kernel);
        break;
      case Method::o_svgd:
        ensemble = o_svgd_step(ensemble, target_, constraint_, cfg_);
        break;
      case Method::annealed_mh:
        mh_->sweep(ensemble, rung_temperature(t), rng_);
        break;
    }
  }

 private:
  void step_chains(ParticleEnsemble& ensemble) {
    Matrix& pts = ensemble.points();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const Vector x = pts.row(i).transpose();
      const Vector noise = rng_.normal_vector(pts.cols());
      const Vector next = cfg_.method == Method::langevin
                              ? langevin_step(x, target_, cfg_.eta, noise)
                              : o_langevin_step(x, target_, constraint_, cfg_, noise);
      pts.row(i) = next.transpose();
    }
  }

  double rung_temperature(std::size_t t) const {
    const auto& ladder = cfg_.annealing.eta_schedule;
    const std::size_t rung = (t - 1) * ladder.size() / cfg_.n_iters;
    return ladder[std::min(rung, ladder.size() - 1)];
  }

  const SamplerConfig& cfg_;
  const TargetDensity& target_;
  const ConstraintSpec& constraint_;
  RandomStream rng_;
  std::optional<AnnealedMetropolis> mh_;
};

}  // namespace

RunRecord run_sampler(const SamplerConfig& cfg, const TargetDensity& target,
                      const ConstraintSpec& c, const ParticleEnsemble& init,
                      const SnapshotObserver& observer) {
  RunRecord record;
  record.config = cfg;
  record.warnings = cfg.validate();
  if (init.dim() != target.dim) {
    throw DimensionMismatch("run_sampler: initial ensemble dimension does not match target");
  }
  if (static_cast<std::size_t>(init.size()) != cfg.n_particles) {
    throw InvalidArgument("run_sampler: initial ensemble size differs from n_particles");
  }

  const auto start = std::chrono::steady_clock::now();
  Recorder recorder{record, c, observer};
  Stepper stepper(cfg, target, c);
  ParticleEnsemble current = init;

  std::size_t t = 0;
  try {
    recorder.snapshot(0, current);
    for (t = 1; t <= cfg.n_iters; ++t) {
      stepper.step(current, t);
      if (!current.all_finite()) {
        throw NonFiniteEvaluation("particle positions became non-finite");
      }
      if (t % cfg.record_every == 0 || t == cfg.n_iters) recorder.snapshot(t, current);
    }
  } catch (const StepError&) {
    throw;
  } catch (const Error& e) {
    throw StepError(t, e.what());
  }

  record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace ogflow
