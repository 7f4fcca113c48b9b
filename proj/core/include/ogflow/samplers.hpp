#pragma once

#include "ogflow/common.hpp"
#include "ogflow/ensemble.hpp"
#include "ogflow/geometry.hpp"
#include "ogflow/kernels.hpp"
#include "ogflow/metrics.hpp"
#include "ogflow/targets.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ogflow {

enum class Method { langevin, o_langevin, svgd, o_svgd, annealed_mh };

std::string_view method_name(Method m) noexcept;

/// Throws InvalidArgument on an unknown name.
Method parse_method(std::string_view name);

/// Temperature ladder and proposal scales for the annealed Metropolis reference.
struct AnnealingConfig {
  /// Strictly decreasing, positive.
  std::vector<double> eta_schedule{1e-1, 1e-2, 1e-3};
  /// Level z of the conditioned measure.
  double level = 0.0;
  /// Proposal sd along grad g is normal_scale * sqrt(min(eta, 1)).
  double normal_scale = 1.0;
  /// Proposal sd within the tangent space, independent of eta.
  double tangential_scale = 0.5;

  /// Throws BadSchedule or InvalidArgument.
  void validate() const;
};

struct SamplerConfig {
  Method method = Method::o_langevin;
  /// Step size.
  double eta = 0.01;
  PsiParams psi;
  std::size_t n_particles = 50;
  std::size_t n_iters = 1000;
  std::uint64_t seed = 0;
  KernelSpec kernel;
  /// Drop the Hessian terms (r in O-Langevin, k D(x) r(y) in O-SVGD).
  bool second_order_free = false;
  std::size_t record_every = 1;
  AnnealingConfig annealing;

  /// Throws on invalid settings. Returns warnings, e.g. eta * alpha > 1 for
  /// linear drift. eta * alpha > 2 throws UnstableStepSize.
  std::vector<std::string> validate() const;
};

struct Snapshot {
  std::size_t iteration = 0;
  ParticleEnsemble ensemble;
};

struct RunRecord {
  SamplerConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<MetricSeries> metric_series;
  double wall_time = 0.0;
  std::vector<std::string> warnings;

  const ParticleEnsemble& final_samples() const { return snapshots.back().ensemble; }
  const MetricSeries& series(std::string_view name) const;
};

// Single-point Langevin family -------------------------------------------

/// x + eta s_pi(x) + sqrt(2 eta) noise.
Vector langevin_step(const Vector& x, const TargetDensity& target, double eta,
                     const Vector& noise);

/// Deterministic O-Langevin velocity v_sharp + D s_pi + r (r omitted when
/// second_order_free).
Vector o_langevin_drift(const Vector& x, const TargetDensity& target,
                        const ConstraintSpec& c, const PsiParams& psi,
                        bool second_order_free = false);

/// x + eta (v_sharp + D s_pi + r) + sqrt(2 eta) D noise.
Vector o_langevin_step(const Vector& x, const TargetDensity& target,
                       const ConstraintSpec& c, const SamplerConfig& cfg,
                       const Vector& noise);

// Particle family ---------------------------------------------------------

/// Per-particle SVGD velocity (1/n) sum_j [k_ij s_j + grad_{x_j} k_ij], one row
/// per particle, all computed from the frozen input ensemble.
Matrix svgd_velocity(const ParticleEnsemble& ensemble, const TargetDensity& target,
                     double h);

ParticleEnsemble svgd_step(const ParticleEnsemble& ensemble, const TargetDensity& target,
                           double eta, const KernelSpec& kernel);

/// Per-particle O-SVGD velocity v_sharp(x_i) + (1/n) sum_j [k_perp s_j + div_y k_perp].
/// With second_order_free the divergence is replaced by the surrogate.
Matrix o_svgd_velocity(const ParticleEnsemble& ensemble, const TargetDensity& target,
                       const ConstraintSpec& c, const PsiParams& psi, double h,
                       bool second_order_free = false);

ParticleEnsemble o_svgd_step(const ParticleEnsemble& ensemble, const TargetDensity& target,
                             const ConstraintSpec& c, const SamplerConfig& cfg);

/// Bandwidth used by the SVGD family: the kernel policy, or 1 for a single
/// particle (k(x, x) = 1 and grad k(x, x) = 0 for any bandwidth).
double ensemble_bandwidth(const ParticleEnsemble& ensemble, const KernelSpec& kernel);

// Annealed Metropolis reference -------------------------------------------

/// Random-walk Metropolis-Hastings on the tempered family pi_{eta,z}.
///
/// The proposal covariance at x is tangential_scale^2 D(x) +
/// (normal_scale^2 min(eta, 1)) n n^T with n = grad g / |grad g|. Because it depends on
/// x, the acceptance ratio carries the Hastings term; its determinant parts
/// cancel, so for affine g the ratio reduces to the symmetric one.
class AnnealedMetropolis {
 public:
  AnnealedMetropolis(TargetDensity target, ConstraintSpec constraint,
                     AnnealingConfig config);

  Vector propose(const Vector& x, double eta, RandomStream& rng) const;

  /// log of the acceptance ratio for moving current -> proposal at temperature eta.
  double log_acceptance(const Vector& current, const Vector& proposal, double eta) const;

  /// One proposal/accept step per chain, in row order. Returns the accept count.
  std::size_t sweep(ParticleEnsemble& chains, double eta, RandomStream& rng) const;

  const AnnealingConfig& config() const noexcept { return config_; }

 private:
  double normal_sd(double eta) const;
  double proposal_quadratic(const Vector& at, const Vector& delta, double eta) const;

  TargetDensity target_;
  ConstraintSpec constraint_;
  AnnealingConfig config_;
};

/// n_chains chains started from N(0, I) draws, run steps_per_eta sweeps at each
/// temperature in turn; returns the final states.
ParticleEnsemble annealed_mh_reference(const TargetDensity& target,
                                       const ConstraintSpec& c, double z,
                                       const std::vector<double>& eta_schedule,
                                       std::size_t steps_per_eta, std::size_t n_chains,
                                       std::uint64_t seed);

// Runner ------------------------------------------------------------------

/// Extra per-snapshot metrics; push (name, value) pairs into `out`.
using SnapshotObserver = std::function<void(
    std::size_t iteration, const ParticleEnsemble& ensemble,
    std::vector<std::pair<std::string, double>>& out)>;

/// Iterates the configured method from `init`, snapshotting at iteration 0,
/// every record_every iterations, and at n_iters. Each snapshot records the
/// metrics "mae" and "max_abs_g". For annealed_mh one iteration is one sweep
/// and the n_iters sweeps are split evenly across the ladder.
///
/// Errors raised inside a step are rethrown as StepError with the iteration.
RunRecord run_sampler(const SamplerConfig& cfg, const TargetDensity& target,
                      const ConstraintSpec& c, const ParticleEnsemble& init,
                      const SnapshotObserver& observer = {});

}  // namespace ogflow
