#include "ogflow/oracles.hpp"

#include <cmath>

namespace ogflow::oracles {

namespace {

double step_for(double xi, double scale) { return scale * (1.0 + std::abs(xi)); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteEvaluation(std::string(what) + ": non-finite value");
}

}  // namespace

void FdConfig::validate() const {
  if (!(step_scale > 0.0 && step_scale <= 1e-2)) {
    throw InvalidArgument("finite differences: step_scale must lie in (0, 1e-2]");
  }
  if (!(relative_tol > 0.0)) {
    throw InvalidArgument("finite differences: relative_tol must be positive");
  }
}

Vector fd_gradient(const ScalarField& f, const Vector& x, const FdConfig& cfg) {
  cfg.validate();
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_for(x[i], cfg.step_scale);
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    require_finite(up, "fd_gradient");
    require_finite(down, "fd_gradient");
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

Matrix fd_jacobian(const VectorField& f, const Vector& x, const FdConfig& cfg) {
  cfg.validate();
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = step_for(x[j], cfg.step_scale);
    probe[j] = x[j] + h;
    const Vector up = f(probe);
    probe[j] = x[j] - h;
    const Vector down = f(probe);
    probe[j] = x[j];
    if (!up.allFinite() || !down.allFinite()) {
      throw NonFiniteEvaluation("fd_jacobian: non-finite value");
    }
    jac.col(j) = (up - down) / (2.0 * h);
  }
  return jac;
}

Matrix fd_hessian(const ScalarField& f, const Vector& x, double step_scale) {
  const FdConfig outer{step_scale, 1e-3};
  const FdConfig inner{step_scale, 1e-3};
  const Matrix jac = fd_jacobian(
      [&](const Vector& p) { return fd_gradient(f, p, inner); }, x, outer);
  return 0.5 * (jac + jac.transpose());
}

Vector fd_divergence_matrix(const MatrixField& field, const Vector& x,
                            const FdConfig& cfg) {
  cfg.validate();
  const Eigen::Index d = x.size();
  Vector div = Vector::Zero(d);
  Vector probe = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = step_for(x[j], cfg.step_scale);
    probe[j] = x[j] + h;
    const Matrix up = field(probe);
    probe[j] = x[j] - h;
    const Matrix down = field(probe);
    probe[j] = x[j];
    if (!up.allFinite() || !down.allFinite()) {
      throw NonFiniteEvaluation("fd_divergence_matrix: non-finite value");
    }
    div += (up.col(j) - down.col(j)) / (2.0 * h);
  }
  return div;
}

double rk4_integrate(const std::function<double(double, double)>& rhs, double s0,
                     double t_end, std::size_t n_steps) {
  if (n_steps < 1) throw InvalidArgument("rk4: n_steps must be at least 1");
  const double dt = t_end / static_cast<double>(n_steps);
  double s = s0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const double k1 = rhs(t, s);
    const double k2 = rhs(t + 0.5 * dt, s + 0.5 * dt * k1);
    const double k3 = rhs(t + 0.5 * dt, s + 0.5 * dt * k2);
    const double k4 = rhs(t + dt, s + dt * k3);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite(s, "rk4_integrate");
  }
  return s;
}

MeanEstimate mc_mean(const std::function<double(RandomStream&)>& draw, std::size_t n,
                     std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("mc_mean: need at least two draws");
  RandomStream rng(seed);
  // Welford's running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double v = draw(rng);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

double relative_error(const Vector& a, const Vector& b, double floor) {
  const double scale = std::max(b.lpNorm<Eigen::Infinity>(), floor);
  return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace ogflow::oracles
