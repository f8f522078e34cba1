#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracop {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. Everything derives from a standard exception so callers can
// catch broadly; the CLI maps these onto exit codes.

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Resolvent requested at (or numerically at) a point of the spectrum.
class NearSingularError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation needs structure (eigendecomposition, adjoint) the operator lacks.
class UnsupportedOperatorError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Non-finite value produced inside a quadrature or recursion.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A requested accuracy could not be reached; carries what was achieved.
class ToleranceError : public std::runtime_error {
public:
  ToleranceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// Fixed-point iteration hit its iteration cap; carries the increment history.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::vector<double> increments)
      : std::runtime_error(what), increments_(std::move(increments)) {}
  const std::vector<double>& increments() const noexcept { return increments_; }

private:
  std::vector<double> increments_;
};

/// Semilinear iterate left the ball on which the nonlinearity is controlled.
class BallViolationError : public std::runtime_error {
public:
  BallViolationError(const std::string& what, double norm, double radius)
      : std::runtime_error(what), norm_(norm), radius_(radius) {}
  double norm() const noexcept { return norm_; }
  double radius() const noexcept { return radius_; }

private:
  double norm_;
  double radius_;
};

/// Empirical contraction ratio stayed >= 1.
class ContractionError : public std::runtime_error {
public:
  ContractionError(const std::string& what, std::vector<double> ratios)
      : std::runtime_error(what), ratios_(std::move(ratios)) {}
  const std::vector<double>& ratios() const noexcept { return ratios_; }

private:
  std::vector<double> ratios_;
};

/// Unregularized least squares requested on a numerically rank-deficient map.
class IllPosedError : public std::runtime_error {
public:
  IllPosedError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

private:
  double sigma_min_;
};

/// Input violates a hypothesis an estimate check relies on.
class HypothesisError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Order of the time-fractional derivative, strictly inside (0,1).
class FractionalOrder {
public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw DomainError("fractional order must lie in (0,1), got " + std::to_string(alpha));
    }
  }
  double alpha() const noexcept { return alpha_; }
  double gamma_1_minus_alpha() const { return std::tgamma(1.0 - alpha_); }
  double gamma_2_minus_alpha() const { return std::tgamma(2.0 - alpha_); }
  double gamma_alpha() const { return std::tgamma(alpha_); }

private:
  double alpha_;
};

/// Principal-branch power with the cut on (-inf, 0].
inline Complex principal_pow(Complex z, double p) {
  if (z == Complex(0.0, 0.0)) {
    return p == 0.0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  }
  return std::exp(p * std::log(z));
}

/// 1/Gamma(x) for real x, zero at the poles of Gamma.
inline double rgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    return 0.0;
  }
  if (x > 171.0) {
    return std::exp(-std::lgamma(x));
  }
  return 1.0 / std::tgamma(x);
}

/// b^p - a^p for 0 <= a <= b without cancellation when b is close to a.
inline double pow_diff(double b, double a, double p) {
  if (a <= 0.0) {
    return std::pow(b, p);
  }
  return std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a));
}

}  // namespace fracop
