#include "ogflow/metrics.hpp"

#include <cmath>

namespace ogflow {

void MetricSeries::append(std::size_t iteration, double value) {
  if (!values.empty() && iteration <= values.back().first) {
    throw InvalidArgument("metric series " + name + ": iterations must increase");
  }
  values.emplace_back(iteration, value);
}

namespace {

// Sum over all ordered pairs (i, j) of ||a_i - b_j||, accumulated row by row.
double pairwise_distance_sum(const Matrix& a, const Matrix& b) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    total += (b.rowwise() - a.row(i)).rowwise().norm().sum();
  }
  return total;
}

}  // namespace

double energy_distance(const ParticleEnsemble& a, const ParticleEnsemble& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("energy distance: sample sets differ in dimension");
  }
  if (a.size() < 1 || b.size() < 1) {
    throw InvalidArgument("energy distance: empty sample set");
  }
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  const double cross = pairwise_distance_sum(a.points(), b.points()) / (n * m);
  const double within_a = pairwise_distance_sum(a.points(), a.points()) / (n * n);
  const double within_b = pairwise_distance_sum(b.points(), b.points()) / (m * m);
  return 2.0 * cross - within_a - within_b;
}

EnergyDistanceReference::EnergyDistanceReference(ParticleEnsemble reference)
    : reference_(std::move(reference)) {
  const double m = static_cast<double>(reference_.size());
  within_ = pairwise_distance_sum(reference_.points(), reference_.points()) / (m * m);
}

double EnergyDistanceReference::distance_to(const ParticleEnsemble& samples) const {
  if (samples.dim() != reference_.dim()) {
    throw DimensionMismatch("energy distance: sample sets differ in dimension");
  }
  const double n = static_cast<double>(samples.size());
  const double m = static_cast<double>(reference_.size());
  const double cross = pairwise_distance_sum(samples.points(), reference_.points()) / (n * m);
  const double within_a = pairwise_distance_sum(samples.points(), samples.points()) / (n * n);
  return 2.0 * cross - within_a - within_;
}

double mae(const ParticleEnsemble& samples, const ConstraintSpec& c) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    total += std::abs(c.value(samples.particle(i)));
  }
  return total / static_cast<double>(samples.size());
}

double max_abs_constraint(const ParticleEnsemble& samples, const ConstraintSpec& c) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    worst = std::max(worst, std::abs(c.value(samples.particle(i))));
  }
  return worst;
}

double support_bound(double m0, const PsiParams& p, double t) {
  if (m0 < 0.0) throw InvalidArgument("support bound: m0 must be nonnegative");
  if (t < 0.0) throw InvalidArgument("support bound: t must be nonnegative");
  if (m0 == 0.0 || t == 0.0) return m0;
  if (p.beta == 0.0) return m0 * std::exp(-p.alpha * t);
  return std::pow(std::pow(m0, -p.beta) + p.alpha * p.beta * t, -1.0 / p.beta);
}

MeanEstimate stein_residual_estimate(const ParticleEnsemble& samples,
                                     const TargetDensity& target,
                                     const ConstraintSpec& c, const Vector& direction) {
  if (samples.dim() != direction.size()) {
    throw DimensionMismatch("stein residual: direction dimension mismatch");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("stein residual: direction must have unit norm");
  }
  const Eigen::Index n = samples.size();
  Vector terms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector x = samples.particle(i);
    const PointGeometry geo = evaluate_geometry(x, c, true);
    // D is symmetric, so div(D c) = r^T c.
    terms[i] = target.score(x).dot(geo.projection * direction) +
               geo.correction.dot(direction);
  }
  MeanEstimate est;
  est.mean = terms.mean();
  if (n > 1) {
    const double var = (terms.array() - est.mean).square().sum() / static_cast<double>(n - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

double stein_residual(const ParticleEnsemble& samples, const TargetDensity& target,
                      const ConstraintSpec& c, const Vector& direction) {
  return stein_residual_estimate(samples, target, c, direction).mean;
}

double orthogonal_fisher(const ParticleEnsemble& samples, const VectorField& q_score,
                         const TargetDensity& target, const ConstraintSpec& c) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const Vector x = samples.particle(i);
    const Matrix d = projection_matrix(c.gradient(x), c.grad_floor);
    total += (d * (q_score(x) - target.score(x))).squaredNorm();
  }
  return total / static_cast<double>(samples.size());
}

}  // namespace ogflow
