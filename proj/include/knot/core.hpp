#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace knot {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid caller input (bad exponent, malformed file, ...). Maps to a usage error in the CLI.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A grid cannot represent the requested modes without aliasing.
class AliasingError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Two fields or curves live on incompatible grids.
class GridMismatchError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// The curve must carry a unit-speed certificate for this operation.
class UncertifiedCurveError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// |γ'| vanishes somewhere, so no arc-length parametrization exists.
class SingularParametrizationError : public Error {
 public:
  using Error::Error;
};

// Requested accuracy is beyond what the chosen resolution can deliver.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// The curve is (numerically) self-intersecting; the energy is infinite.
class SelfIntersectionError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure (flow, extrapolation) gave up.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace knot
