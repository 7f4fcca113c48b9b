#include "ogflow/geometry.hpp"

#include <cmath>
#include <sstream>

namespace ogflow {

void PsiParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("psi: alpha must be positive and finite");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw InvalidArgument("psi: beta must lie in [0, 1]");
  }
}

double psi(double z, const PsiParams& p) {
  if (p.beta == 0.0) return p.alpha * z;
  const double mag = p.alpha * std::pow(std::abs(z), 1.0 + p.beta);
  return z < 0.0 ? -mag : (z > 0.0 ? mag : 0.0);
}

namespace {

void require_nonsingular(double norm_sq, double grad_floor) {
  if (!(norm_sq >= grad_floor * grad_floor) || norm_sq == 0.0) {
    std::ostringstream msg;
    msg << "gradient norm " << std::sqrt(norm_sq) << " below floor " << grad_floor;
    throw SingularGradient(msg.str());
  }
}

Matrix projector(const Vector& grad, double norm_sq) {
  const auto d = grad.size();
  return Matrix::Identity(d, d) - grad * grad.transpose() / norm_sq;
}

Vector correction_from(const Vector& grad, double norm_sq, const Matrix& hess) {
  const Vector h_grad = hess * grad;
  const double curvature = grad.dot(h_grad);
  return -h_grad / norm_sq +
         (2.0 * curvature / (norm_sq * norm_sq) - hess.trace() / norm_sq) * grad;
}

}  // namespace

Matrix projection_matrix(const Vector& grad, double grad_floor) {
  const double norm_sq = grad.squaredNorm();
  require_nonsingular(norm_sq, grad_floor);
  return projector(grad, norm_sq);
}

Vector v_sharp(const Vector& x, const ConstraintSpec& c, const PsiParams& p) {
  const Vector grad = c.gradient(x);
  const double norm_sq = grad.squaredNorm();
  require_nonsingular(norm_sq, c.grad_floor);
  return (-psi(c.value(x), p) / norm_sq) * grad;
}

Vector correction_field(const Vector& x, const ConstraintSpec& c) {
  const Vector grad = c.gradient(x);
  const double norm_sq = grad.squaredNorm();
  require_nonsingular(norm_sq, c.grad_floor);
  return correction_from(grad, norm_sq, c.hessian(x));
}

PointGeometry evaluate_geometry(const Vector& x, const ConstraintSpec& c,
                                bool with_correction) {
  PointGeometry geo;
  geo.value = c.value(x);
  geo.gradient = c.gradient(x);
  geo.grad_norm_sq = geo.gradient.squaredNorm();
  require_nonsingular(geo.grad_norm_sq, c.grad_floor);
  geo.projection = projector(geo.gradient, geo.grad_norm_sq);
  if (with_correction) {
    geo.correction = correction_from(geo.gradient, geo.grad_norm_sq, c.hessian(x));
  }
  return geo;
}

double GeometryReport::residual(const std::string& name) const {
  for (const auto& r : identity_residuals) {
    if (r.name == name) return r.value;
  }
  throw InvalidArgument("no residual named " + name);
}

GeometryReport check_identities(const Vector& x, const ConstraintSpec& c) {
  const PointGeometry geo = evaluate_geometry(x, c, true);
  const Matrix hess = c.hessian(x);
  const Matrix& d = geo.projection;

  GeometryReport report;
  report.point = x;
  report.d_matrix = d;
  report.r_vector = geo.correction;
  report.identity_residuals = {
      {kResidualAnnihilation, (d * geo.gradient).norm()},
      {kResidualIdempotence, (d * d - d).norm()},
      {kResidualTraceIdentity,
       geo.gradient.dot(geo.correction) + (d * hess * d).trace()},
  };
  return report;
}

ConstraintSpec synthetic_constraint() {
  ConstraintSpec c;
  c.value = [](const Vector& x) { return x[0] + x[1] * x[1] * x[1]; };
  c.gradient = [](const Vector& x) {
    Vector g(2);
    g << 1.0, 3.0 * x[1] * x[1];
    return g;
  };
  c.hessian = [](const Vector& x) {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 6.0 * x[1];
    return h;
  };
  return c;
}

ConstraintSpec affine_constraint(const Vector& normal, double offset) {
  ConstraintSpec c;
  c.value = [normal, offset](const Vector& x) { return normal.dot(x) - offset; };
  c.gradient = [normal](const Vector&) { return normal; };
  c.hessian = [d = normal.size()](const Vector&) -> Matrix { return Matrix::Zero(d, d); };
  return c;
}

ConstraintSpec half_squared_norm_constraint(double level) {
  ConstraintSpec c;
  c.value = [level](const Vector& x) { return 0.5 * x.squaredNorm() - level; };
  c.gradient = [](const Vector& x) -> Vector { return x; };
  c.hessian = [](const Vector& x) -> Matrix {
    return Matrix::Identity(x.size(), x.size());
  };
  return c;
}

}  // namespace ogflow
