#include "ogflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ogflow {

namespace {

void require_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw NonPositiveBandwidth("rbf: bandwidth must be positive and finite");
  }
}

double median_of(std::vector<double>& values) {
  const std::size_t m = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (m % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

KernelSpec KernelSpec::fixed(double h) {
  require_bandwidth(h);
  KernelSpec k;
  k.policy = Bandwidth::fixed;
  k.fixed_h = h;
  return k;
}

double KernelSpec::bandwidth_for(const ParticleEnsemble& particles) const {
  if (policy == Bandwidth::fixed) {
    require_bandwidth(fixed_h);
    return fixed_h;
  }
  return median_bandwidth(particles);
}

double rbf(const Vector& x, const Vector& y, double h) {
  require_bandwidth(h);
  return std::exp(-(x - y).squaredNorm() / h);
}

Vector rbf_grad_y(const Vector& x, const Vector& y, double h) {
  return (2.0 * rbf(x, y, h) / h) * (x - y);
}

double median_bandwidth(const ParticleEnsemble& particles) {
  const Eigen::Index n = particles.size();
  if (n < 2) throw InvalidArgument("median bandwidth needs at least two particles");

  const Matrix& pts = particles.points();
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back((pts.row(i) - pts.row(j)).norm());
    }
  }

  double med = median_of(dists);
  if (med == 0.0) {
    std::erase(dists, 0.0);
    if (dists.empty()) throw DegenerateEnsemble("all particles coincide");
    med = median_of(dists);
  }
  return med * med / std::log(static_cast<double>(n) + 1.0);
}

Matrix k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c, double h) {
  const double k = rbf(x, y, h);
  return k * projection_matrix(c.gradient(x), c.grad_floor) *
         projection_matrix(c.gradient(y), c.grad_floor);
}

Vector div_y_k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c,
                    double h) {
  const Matrix dx = projection_matrix(c.gradient(x), c.grad_floor);
  const PointGeometry gy = evaluate_geometry(y, c, true);
  return dx * (gy.projection * rbf_grad_y(x, y, h) + rbf(x, y, h) * gy.correction);
}

Vector surrogate_grad_k_perp(const Vector& x, const Vector& y, const ConstraintSpec& c,
                             double h) {
  const Matrix dx = projection_matrix(c.gradient(x), c.grad_floor);
  const Matrix dy = projection_matrix(c.gradient(y), c.grad_floor);
  return dx * (dy * rbf_grad_y(x, y, h));
}

}  // namespace ogflow
