#include "ogflow/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ogflow::oracles {
namespace {

TEST(FdGradient, LinearAndQuadraticAreExact) {
  Vector a(3);
  a << 1.5, -2.0, 0.25;
  const ScalarField linear = [&](const Vector& x) { return a.dot(x); };
  const ScalarField quad = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  Vector x(3);
  x << 0.3, -1.2, 2.0;
  EXPECT_LT(relative_error(fd_gradient(linear, x), a), 1e-9);
  EXPECT_LT(relative_error(fd_gradient(quad, x), x), 1e-9);
}

TEST(FdGradient, NonFiniteEvaluationThrows) {
  const ScalarField bad = [](const Vector& x) { return std::log(x[0]); };
  EXPECT_THROW(fd_gradient(bad, Vector::Zero(1)), NonFiniteEvaluation);
}

TEST(FdConfig, StepBounds) {
  EXPECT_THROW((FdConfig{0.0, 1e-4}.validate()), InvalidArgument);
  EXPECT_THROW((FdConfig{0.1, 1e-4}.validate()), InvalidArgument);
  EXPECT_NO_THROW((FdConfig{1e-2, 1e-4}.validate()));
}

TEST(FdDivergence, Examples) {
  const MatrixField constant = [](const Vector&) { return Matrix::Identity(2, 2).eval(); };
  Vector x(2);
  x << 1.0, 2.0;
  EXPECT_LT(fd_divergence_matrix(constant, x).norm(), 1e-12);

  const MatrixField outer = [](const Vector& p) { return (p * p.transpose()).eval(); };
  const Vector div = fd_divergence_matrix(outer, x);
  EXPECT_NEAR(div[0], 3.0, 1e-8);
  EXPECT_NEAR(div[1], 6.0, 1e-8);
}

TEST(Rk4, ClosedForms) {
  EXPECT_EQ(rk4_integrate([](double, double) { return 0.0; }, 1.7, 1.0, 10), 1.7);
  EXPECT_NEAR(rk4_integrate([](double, double s) { return -s; }, 1.0, 1.0, 100), std::exp(-1.0),
              1e-8);
  EXPECT_NEAR(rk4_integrate([](double, double s) { return -s * s; }, 1.0, 1.0, 100), 0.5, 1e-8);
  EXPECT_THROW(rk4_integrate([](double, double s) { return s; }, 1.0, 1.0, 0), InvalidArgument);
}

TEST(Rk4, ObservedOrder) {
  const auto order = [](const std::function<double(double, double)>& rhs, double exact) {
    const double e1 = std::abs(rk4_integrate(rhs, 1.0, 1.0, 8) - exact);
    const double e2 = std::abs(rk4_integrate(rhs, 1.0, 1.0, 16) - exact);
    return std::log2(e1 / e2);
  };
  EXPECT_GE(order([](double, double s) { return -s; }, std::exp(-1.0)), 3.8);
  EXPECT_GE(order([](double, double s) { return -s * s; }, 0.5), 3.8);
}

TEST(McMean, ConstantAndNormal) {
  const MeanEstimate c = mc_mean([](RandomStream&) { return 2.5; }, 100, 1);
  EXPECT_EQ(c.mean, 2.5);
  EXPECT_EQ(c.std_error, 0.0);

  const std::size_t n = 1000000;
  const MeanEstimate z = mc_mean([](RandomStream& r) { return r.normal(); }, n, 42);
  EXPECT_LT(std::abs(z.mean), 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(z.std_error, 1.0 / std::sqrt(static_cast<double>(n)), 1e-5);

  const MeanEstimate again = mc_mean([](RandomStream& r) { return r.normal(); }, n, 42);
  EXPECT_EQ(z.mean, again.mean);
  EXPECT_THROW(mc_mean([](RandomStream&) { return 0.0; }, 1, 0), InvalidArgument);
}

}  // namespace
}  // namespace ogflow::oracles
