#include "ogflow/ensemble.hpp"

namespace ogflow {

ParticleEnsemble::ParticleEnsemble(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidArgument("particle ensemble must hold at least one point");
  }
  if (!points_.allFinite()) {
    throw InvalidArgument("particle ensemble contains non-finite entries");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept {
  // splitmix64 finaliser over base + golden-ratio multiple of the tag.
  std::uint64_t z = base + (tag + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ParticleEnsemble gaussian_cloud(const Vector& center, double scale, Eigen::Index n,
                                std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("gaussian cloud: n must be at least 1");
  if (!(scale >= 0.0)) throw InvalidArgument("gaussian cloud: scale must be nonnegative");
  RandomStream rng(seed);
  Matrix pts(n, center.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.row(i) = (center + scale * rng.normal_vector(center.size())).transpose();
  }
  return ParticleEnsemble(std::move(pts));
}

}  // namespace ogflow
