#pragma once

// Independent numerical reference routes. Nothing here calls into the
// closed-form geometry, so the two can be checked against each other.

#include "ogflow/common.hpp"
#include "ogflow/ensemble.hpp"
#include "ogflow/metrics.hpp"

#include <cstdint>
#include <functional>

namespace ogflow::oracles {

struct FdConfig {
  /// Per-coordinate step is step_scale * (1 + |x_i|).
  double step_scale = 1e-5;
  double relative_tol = 1e-4;

  /// Throws InvalidArgument unless step_scale lies in (0, 1e-2].
  void validate() const;
};

/// Central-difference gradient.
Vector fd_gradient(const ScalarField& f, const Vector& x, const FdConfig& cfg = {});

/// Central-difference Jacobian of a vector field; row i is d field_i / dx.
Matrix fd_jacobian(const VectorField& f, const Vector& x, const FdConfig& cfg = {});

/// Hessian as the symmetrised Jacobian of fd_gradient. Uses the larger inner
/// step 1e-4 since roundoff is amplified twice.
Matrix fd_hessian(const ScalarField& f, const Vector& x, double step_scale = 1e-4);

/// Component i = sum_j central-difference d/dx_j of field(x)_{ij}.
Vector fd_divergence_matrix(const MatrixField& field, const Vector& x,
                            const FdConfig& cfg = {});

/// Classical fourth-order Runge-Kutta for a scalar ODE ds/dt = rhs(t, s).
double rk4_integrate(const std::function<double(double, double)>& rhs, double s0,
                     double t_end, std::size_t n_steps);

/// Mean and standard error of n draws, each taking the shared stream.
MeanEstimate mc_mean(const std::function<double(RandomStream&)>& draw, std::size_t n,
                     std::uint64_t seed);

/// max_k |a_k - b_k| / max(|b|_inf, floor).
double relative_error(const Vector& a, const Vector& b, double floor = 1e-8);

}  // namespace ogflow::oracles
