#pragma once

#include "ogflow/common.hpp"
#include "ogflow/ensemble.hpp"
#include "ogflow/geometry.hpp"
#include "ogflow/targets.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ogflow {

struct MetricSeries {
  std::string name;
  std::vector<std::pair<std::size_t, double>> values;

  /// Appends a point; throws InvalidArgument if `iteration` does not increase.
  void append(std::size_t iteration, double value);
};

/// V-statistic estimate of 2 E||Z - W|| - E||Z - Z'|| - E||W - W'||.
///
/// Self-pairs are included (they contribute zero), so the estimate is
/// nonnegative and biased upward by O(1/n + 1/m) relative to the population
/// value. Throws DimensionMismatch when the sets live in different spaces.
double energy_distance(const ParticleEnsemble& a, const ParticleEnsemble& b);

/// Fixed reference set with its within-set term precomputed, for repeated
/// energy distances against the same ground truth.
class EnergyDistanceReference {
 public:
  explicit EnergyDistanceReference(ParticleEnsemble reference);

  /// Equal to energy_distance(samples, reference()).
  double distance_to(const ParticleEnsemble& samples) const;

  const ParticleEnsemble& reference() const noexcept { return reference_; }

 private:
  ParticleEnsemble reference_;
  double within_ = 0.0;
};

/// (1/n) sum |g(x_i)|.
double mae(const ParticleEnsemble& samples, const ConstraintSpec& c);

/// max_i |g(x_i)|.
double max_abs_constraint(const ParticleEnsemble& samples, const ConstraintSpec& c);

/// Solution at time t of dS/dt = -psi(S), S(0) = m0:
/// m0 exp(-alpha t) for beta = 0, (m0^-beta + alpha beta t)^(-1/beta) otherwise.
double support_bound(double m0, const PsiParams& p, double t);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Empirical mean of s_pi^T D c + r^T c, the Stein operator applied to the
/// tangential test field phi(x) = D(x) c. `direction` must have unit norm.
double stein_residual(const ParticleEnsemble& samples, const TargetDensity& target,
                      const ConstraintSpec& c, const Vector& direction);

/// As stein_residual, with the Monte-Carlo standard error of the mean.
MeanEstimate stein_residual_estimate(const ParticleEnsemble& samples,
                                     const TargetDensity& target,
                                     const ConstraintSpec& c, const Vector& direction);

/// Monte-Carlo average of ||D (s_q - s_pi)||^2 over `samples`, for q with a
/// known score.
double orthogonal_fisher(const ParticleEnsemble& samples, const VectorField& q_score,
                         const TargetDensity& target, const ConstraintSpec& c);

}  // namespace ogflow
