#include "ogflow/targets.hpp"

#include <cmath>
#include <numbers>

namespace ogflow {

TargetDensity synthetic_target() {
  TargetDensity t;
  t.dim = 2;
  t.log_density = [](const Vector& x) {
    const double y0 = x[0] + x[1] * x[1] * x[1];
    return -0.5 * (y0 * y0 + x[1] * x[1]) - std::log(2.0 * std::numbers::pi);
  };
  t.score = [](const Vector& x) {
    const double y0 = x[0] + x[1] * x[1] * x[1];
    Vector s(2);
    s << -y0, -3.0 * x[1] * x[1] * y0 - x[1];
    return s;
  };
  return t;
}

ParticleEnsemble synthetic_ground_truth(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("ground truth: n must be at least 1");
  RandomStream rng(seed);
  Matrix pts(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = rng.normal();
    pts(i, 0) = -(y * y * y);
    pts(i, 1) = y;
  }
  return ParticleEnsemble(std::move(pts));
}

TargetDensity isotropic_gaussian_target(const Vector& mean) {
  TargetDensity t;
  t.dim = mean.size();
  t.log_density = [mean](const Vector& x) { return -0.5 * (x - mean).squaredNorm(); };
  t.score = [mean](const Vector& x) -> Vector { return mean - x; };
  return t;
}

TemperedTarget::TemperedTarget(TargetDensity base, ConstraintSpec constraint,
                               double eta, double z)
    : base_(std::move(base)), constraint_(std::move(constraint)), eta_(eta), z_(z) {
  if (!(eta_ > 0.0)) throw NonPositiveEta("tempered target: eta must be positive");
}

double TemperedTarget::log_density(const Vector& x) const {
  const double gap = constraint_.value(x) - z_;
  return base_.log_density(x) - gap * gap / (2.0 * eta_);
}

Vector TemperedTarget::score(const Vector& x) const {
  const double gap = constraint_.value(x) - z_;
  return base_.score(x) - (gap / eta_) * constraint_.gradient(x);
}

TargetDensity TemperedTarget::as_density() const {
  TargetDensity t;
  t.dim = base_.dim;
  t.log_density = [self = *this](const Vector& x) { return self.log_density(x); };
  t.score = [self = *this](const Vector& x) { return self.score(x); };
  return t;
}

TemperedTarget tempered_target(const TargetDensity& base, const ConstraintSpec& c,
                               double eta, double z) {
  return TemperedTarget(base, c, eta, z);
}

}  // namespace ogflow
