#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace ogflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ||grad g|| fell below the configured floor; the projection is undefined there.
class SingularGradient : public Error {
 public:
  using Error::Error;
};

class NonPositiveEta : public Error {
 public:
  using Error::Error;
};

class NonPositiveBandwidth : public Error {
 public:
  using Error::Error;
};

/// All pairwise particle distances are zero.
class DegenerateEnsemble : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Temperature ladder is empty, non-positive or not strictly decreasing.
class BadSchedule : public Error {
 public:
  using Error::Error;
};

class NonFiniteEvaluation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// eta * alpha exceeds 2 for linear drift; the g-recursion diverges.
class UnstableStepSize : public Error {
 public:
  using Error::Error;
};

/// A sampler step failed; carries the iteration at which it happened.
class StepError : public Error {
 public:
  StepError(std::size_t iteration, const std::string& what)
      : Error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace ogflow
