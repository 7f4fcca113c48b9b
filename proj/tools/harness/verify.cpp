#include "harness.hpp"

#include "ogflow/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

namespace ogflow::harness {

namespace {

constexpr double kFdFloor = 1e-6;

struct PointSource {
  RandomStream rng;
  Vector next() {
    Vector x(2);
    x << -3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform();
    return x;
  }
};

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// Runs `residual` at every point and keeps the worst value. A SingularGradient
// fails the check instead of escaping.
VerifyCheck sweep(const std::string& name, double tolerance, std::size_t n,
                  std::uint64_t seed, const std::function<double(const Vector&)>& residual) {
  VerifyCheck check{name, 0.0, tolerance, true, {}};
  PointSource points{RandomStream(seed)};
  for (std::size_t k = 0; k < n; ++k) {
    const Vector x = points.next();
    try {
      const double r = residual(x);
      if (!(std::abs(r) <= check.max_residual) || std::isnan(r)) {
        check.max_residual = std::isnan(r) ? r : std::max(check.max_residual, std::abs(r));
      }
    } catch (const SingularGradient& e) {
      check.passed = false;
      check.note = std::string("SingularGradient: ") + e.what();
      return check;
    }
  }
  check.passed = check.max_residual <= tolerance;
  return check;
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(const VerifyOptions& opts) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity target = synthetic_target();
  const oracles::FdConfig fd;
  const double sign = opts.negate_correction ? -1.0 : 1.0;
  const std::size_t n = opts.n_points;
  const std::size_t n_fd = opts.n_fd_points;

  std::vector<VerifyCheck> checks;

  checks.push_back(sweep("D annihilates grad g (|D grad g| / |grad g|)", 1e-10, n, opts.seed,
                         [&](const Vector& x) {
                           const GeometryReport rep = check_identities(x, c);
                           return rep.residual(kResidualAnnihilation) / c.gradient(x).norm();
                         }));
  checks.push_back(sweep("D idempotent (|D^2 - D|_F)", 1e-10, n, opts.seed,
                         [&](const Vector& x) {
                           return check_identities(x, c).residual(kResidualIdempotence);
                         }));
  checks.push_back(sweep("grad g^T r + tr(D H D) = 0 (scaled by 1 + |H|_F)", 1e-8, n,
                         opts.seed, [&](const Vector& x) {
                           const GeometryReport rep = check_identities(x, c);
                           const Matrix hess = c.hessian(x);
                           const Vector r = sign * rep.r_vector;
                           const double res = c.gradient(x).dot(r) +
                                              (rep.d_matrix * hess * rep.d_matrix).trace();
                           return res / (1.0 + hess.norm());
                         }));
  checks.push_back(sweep("D spectrum: one eigenvalue < 0.5, d-1 above", 0.0, n, opts.seed,
                         [&](const Vector& x) {
                           const Matrix d = projection_matrix(c.gradient(x), c.grad_floor);
                           const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(d).eigenvalues();
                           const auto low = (ev.array() < 0.5).count();
                           return low == 1 ? 0.0 : 1.0;
                         }));
  checks.push_back(sweep("hess g symmetric", 1e-10, n, opts.seed, [&](const Vector& x) {
    const Matrix h = c.hessian(x);
    return (h - h.transpose()).lpNorm<Eigen::Infinity>();
  }));
  checks.push_back(sweep("grad g vs central differences (relative)", 1e-4, n_fd, opts.seed + 1,
                         [&](const Vector& x) {
                           return oracles::relative_error(
                               c.gradient(x), oracles::fd_gradient(c.value, x, fd), kFdFloor);
                         }));
  checks.push_back(sweep("hess g vs central differences of grad g (relative)", 1e-3, n_fd,
                         opts.seed + 2, [&](const Vector& x) {
                           const Matrix jac = oracles::fd_jacobian(c.gradient, x, {1e-4, 1e-3});
                           return oracles::relative_error(flatten(c.hessian(x)), flatten(jac),
                                                          kFdFloor);
                         }));
  checks.push_back(sweep("synthetic score vs central differences (relative)", 1e-4, n_fd,
                         opts.seed + 3, [&](const Vector& x) {
                           return oracles::relative_error(
                               target.score(x), oracles::fd_gradient(target.log_density, x, fd),
                               kFdFloor);
                         }));
  checks.push_back(sweep("r vs finite-difference divergence of D (relative)", 1e-4, n_fd,
                         opts.seed + 4, [&](const Vector& x) {
                           const MatrixField d_field = [&](const Vector& p) {
                             return projection_matrix(c.gradient(p), c.grad_floor);
                           };
                           return oracles::relative_error(
                               sign * correction_field(x, c),
                               oracles::fd_divergence_matrix(d_field, x, fd), kFdFloor);
                         }));

  PointSource partners{RandomStream(opts.seed + 5)};
  constexpr double kBandwidth = 2.0;
  checks.push_back(sweep("div_y k_perp vs finite differences of k_perp (relative)", 1e-4, n_fd,
                         opts.seed + 6, [&](const Vector& x) {
                           const Vector y = x + 0.5 * (partners.next() - x);
                           const MatrixField field = [&](const Vector& p) {
                             return k_perp(x, p, c, kBandwidth);
                           };
                           return oracles::relative_error(
                               div_y_k_perp(x, y, c, kBandwidth),
                               oracles::fd_divergence_matrix(field, y, fd), kFdFloor);
                         }));
  checks.push_back(sweep("grad g(x)^T k_perp(x, y) and grad g(x)^T div_y k_perp", 1e-10, n,
                         opts.seed + 7, [&](const Vector& x) {
                           const Vector y = partners.next();
                           const Vector grad = c.gradient(x);
                           const double a =
                               (grad.transpose() * k_perp(x, y, c, kBandwidth)).norm() / grad.norm();
                           const Vector div = div_y_k_perp(x, y, c, kBandwidth);
                           const double b = std::abs(grad.dot(div)) /
                                            (grad.norm() * std::max(1.0, div.norm()));
                           return std::max(a, b);
                         }));

  {
    VerifyCheck check{"psi odd and nondecreasing on a 10^4 grid", 0.0, 0.0, true, {}};
    for (const PsiParams p : {PsiParams{100.0, 0.0}, PsiParams{1.0, 0.5}, PsiParams{3.0, 1.0}}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < 10000; ++k) {
        const double z = -5.0 + 10.0 * k / 9999.0;
        const double v = psi(z, p);
        check.max_residual = std::max(check.max_residual, std::abs(v + psi(-z, p)));
        if (v < prev) check.max_residual = std::max(check.max_residual, prev - v);
        prev = v;
      }
    }
    check.passed = check.max_residual <= check.tolerance;
    checks.push_back(check);
  }

  if (opts.inject_critical_point) {
    const ConstraintSpec sphere = half_squared_norm_constraint(1.0);
    VerifyCheck check{"injected critical point (grad g = 0 at the origin)", 0.0, 0.0, true, {}};
    try {
      check_identities(Vector::Zero(2), sphere);
    } catch (const SingularGradient& e) {
      check.passed = false;
      check.note = std::string("SingularGradient: ") + e.what();
    }
    checks.push_back(check);
  }
  return checks;
}

}  // namespace ogflow::harness
