#pragma once

#include "ogflow/common.hpp"

#include <string>
#include <vector>

namespace ogflow {

/// Scalar level-set constraint g: R^d -> R with analytic first and second
/// derivatives. The sampled manifold is {x : g(x) = 0}.
struct ConstraintSpec {
  ScalarField value;
  VectorField gradient;
  MatrixField hessian;
  /// Points with ||grad g|| below this are rejected as critical.
  double grad_floor = 1e-10;
};

/// Drift psi(z) = alpha * sign(z) * |z|^(1 + beta).
struct PsiParams {
  double alpha = 100.0;
  double beta = 0.0;

  /// Throws InvalidArgument unless alpha > 0 and 0 <= beta <= 1.
  void validate() const;
};

double psi(double z, const PsiParams& p);

/// D = I - grad grad^T / ||grad||^2, the projector onto the tangent space of
/// the level set. Throws SingularGradient when ||grad|| < grad_floor.
Matrix projection_matrix(const Vector& grad, double grad_floor = 1e-10);

/// Parallel velocity -psi(g) grad g / ||grad g||^2.
Vector v_sharp(const Vector& x, const ConstraintSpec& c, const PsiParams& p);

/// r(x) = div D(x), component i = sum_j d_j D_ij, evaluated in closed form:
///
///   r = -H grad / |grad|^2 - (tr H / |grad|^2) grad
///       + 2 (grad^T H grad / |grad|^4) grad
Vector correction_field(const Vector& x, const ConstraintSpec& c);

/// Everything the samplers need at one point, evaluated once.
struct PointGeometry {
  double value = 0.0;
  Vector gradient;
  double grad_norm_sq = 0.0;
  Matrix projection;
  /// Empty unless requested; computing it needs the Hessian.
  Vector correction;
};

PointGeometry evaluate_geometry(const Vector& x, const ConstraintSpec& c,
                                bool with_correction = true);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct GeometryReport {
  Vector point;
  Matrix d_matrix;
  Vector r_vector;
  /// ||D grad g||, ||D^2 - D||_F and grad g^T r + tr(D H D), unclipped.
  std::vector<NamedResidual> identity_residuals;

  double residual(const std::string& name) const;
};

inline constexpr const char* kResidualAnnihilation = "D_grad";
inline constexpr const char* kResidualIdempotence = "D2_minus_D";
inline constexpr const char* kResidualTraceIdentity = "gradT_r_plus_tr_DHD";

GeometryReport check_identities(const Vector& x, const ConstraintSpec& c);

/// g(x) = x_0 + x_1^3, the two-dimensional benchmark constraint.
ConstraintSpec synthetic_constraint();

/// g(x) = normal^T x - offset. D is constant and r vanishes.
ConstraintSpec affine_constraint(const Vector& normal, double offset = 0.0);

/// g(x) = ||x||^2 / 2 - level. Critical point at the origin.
ConstraintSpec half_squared_norm_constraint(double level = 0.0);

}  // namespace ogflow
