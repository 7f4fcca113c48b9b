#pragma once

#include "ogflow/common.hpp"
#include "ogflow/ensemble.hpp"
#include "ogflow/geometry.hpp"

#include <cstdint>

namespace ogflow {

/// Unnormalised target: log-density up to an additive constant, and its score.
struct TargetDensity {
  ScalarField log_density;
  VectorField score;
  Eigen::Index dim = 0;
};

/// pi(x) for x = phi^{-1}(y), y ~ N(0, I), phi(x) = (x0 + x1^3, x1).
/// The Jacobian of phi has unit determinant, so
///   log pi(x) = -((x0 + x1^3)^2 + x1^2) / 2 - log(2 pi).
TargetDensity synthetic_target();

/// Exact draws from pi conditioned on x0 + x1^3 = 0: (-y^3, y), y ~ N(0, 1).
ParticleEnsemble synthetic_ground_truth(Eigen::Index n, std::uint64_t seed);

/// N(mean, I).
TargetDensity isotropic_gaussian_target(const Vector& mean);

/// pi_{eta,z}(x) proportional to pi(x) exp(-(g(x) - z)^2 / (2 eta)).
///
/// Wraps the base density; the base callables are shared, not copied.
class TemperedTarget {
 public:
  TemperedTarget(TargetDensity base, ConstraintSpec constraint, double eta, double z);

  double log_density(const Vector& x) const;
  Vector score(const Vector& x) const;

  double eta() const noexcept { return eta_; }
  double level() const noexcept { return z_; }
  const TargetDensity& base() const noexcept { return base_; }
  const ConstraintSpec& constraint() const noexcept { return constraint_; }

  /// View as a plain TargetDensity. The returned callables share this
  /// object's state by value.
  TargetDensity as_density() const;

 private:
  TargetDensity base_;
  ConstraintSpec constraint_;
  double eta_;
  double z_;
};

/// Throws NonPositiveEta unless eta > 0.
TemperedTarget tempered_target(const TargetDensity& base, const ConstraintSpec& c,
                               double eta, double z);

}  // namespace ogflow
