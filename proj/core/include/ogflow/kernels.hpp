#pragma once

#include "ogflow/common.hpp"
#include "ogflow/ensemble.hpp"
#include "ogflow/geometry.hpp"

namespace ogflow {

/// Bandwidth selection for the RBF kernel k(x, y) = exp(-||x - y||^2 / h).
struct KernelSpec {
  enum class Bandwidth { fixed, median_heuristic };

  Bandwidth policy = Bandwidth::median_heuristic;
  double fixed_h = 1.0;

  static KernelSpec fixed(double h);
  static KernelSpec median() { return {}; }

  /// Fixed h, or the median heuristic evaluated on `particles`.
  double bandwidth_for(const ParticleEnsemble& particles) const;
};

/// exp(-||x - y||^2 / h). Throws NonPositiveBandwidth unless h > 0.
double rbf(const Vector& x, const Vector& y, double h);

/// Gradient of rbf in its second argument: 2 (x - y) / h * k(x, y).
Vector rbf_grad_y(const Vector& x, const Vector& y, double h);

/// med^2 / log(n + 1), med the median pairwise Euclidean distance (mean of
/// the two middle values for an even pair count). When more than half of
/// the pairs coincide the median is taken over the nonzero distances.
/// Throws DegenerateEnsemble when every pair coincides, InvalidArgument when n < 2.
double median_bandwidth(const ParticleEnsemble& particles);

/// k(x, y) D(x) D(y).
Matrix k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c, double h);

/// sum_j d/dy_j of k_perp(x, y)_{ij}, expanded as D(x) [D(y) grad_y k + k r(y)].
Vector div_y_k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c,
                    double h);

/// Hessian-free surrogate D(x) D(y) grad_y k(x, y); drops the k D(x) r(y) term.
Vector surrogate_grad_k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c,
                             double h);

}  // namespace ogflow
