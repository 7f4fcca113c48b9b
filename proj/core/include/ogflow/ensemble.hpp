#pragma once

#include "ogflow/common.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <cstdint>
#include <string_view>

namespace ogflow {

/// n particles in R^d, stored one per row.
class ParticleEnsemble {
 public:
  ParticleEnsemble() = default;

  /// Throws InvalidArgument when empty or when any entry is non-finite.
  explicit ParticleEnsemble(Matrix points);

  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }

  Vector particle(Eigen::Index i) const { return points_.row(i).transpose(); }

  const Matrix& points() const noexcept { return points_; }
  Matrix& points() noexcept { return points_; }

  bool all_finite() const { return points_.allFinite(); }

  friend bool operator==(const ParticleEnsemble& a, const ParticleEnsemble& b) {
    return a.points_.rows() == b.points_.rows() &&
           a.points_.cols() == b.points_.cols() && a.points_ == b.points_;
  }

 private:
  Matrix points_;
};

/// Identifier written into run metadata so third parties can regenerate draws.
inline constexpr std::string_view kRngAlgorithm =
    "boost::random::mt19937_64 + boost::random::normal_distribution (ziggurat)";

/// Seeded source of standard-normal and uniform draws.
///
/// Both the engine and the distributions come from Boost.Random, whose
/// algorithms are fully specified, so a seed reproduces the same stream on
/// every platform (std::normal_distribution does not guarantee this).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  Vector normal_vector(Eigen::Index d) {
    Vector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = normal();
    return v;
  }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
};

/// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept;

/// Isotropic Gaussian cloud centred at `center`.
ParticleEnsemble gaussian_cloud(const Vector& center, double scale, Eigen::Index n,
                                std::uint64_t seed);

}  // namespace ogflow
