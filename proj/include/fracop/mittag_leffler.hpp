#pragma once

#include "fracop/core.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fracop {

/// Parameters (a1, a2) of E_{a1,a2}(z) = sum_k z^k / Gamma(a1 k + a2).
struct MLParams {
  MLParams(double a1_, double a2_) : a1(a1_), a2(a2_) {
    if (!(a1 > 0.0) || !std::isfinite(a2)) {
      throw DomainError("MLParams: need a1 > 0 and finite a2");
    }
  }
  double a1;
  double a2;
};

enum class MLMethod { Series, Asymptotic, Contour };

const char* to_string(MLMethod m);

struct MLValue {
  Complex value;
  /// Estimated absolute error of value.
  double error_estimate;
  MLMethod method;
};

/// Default relative tolerance: 1e-12 for |z| <= 50, 1e-9 beyond.
double ml_default_tolerance(Complex z);

/// E_{a1,a2}(z) with an error estimate. Methods are tried in the order
/// series -> asymptotic -> Laplace-contour inversion; the first whose own error
/// estimate meets rel_tol wins. Throws ToleranceError (carrying the best
/// achieved relative error) if none does.
MLValue ml_evaluate(const MLParams& p, Complex z, double rel_tol);
inline MLValue ml_evaluate(const MLParams& p, Complex z) {
  return ml_evaluate(p, z, ml_default_tolerance(z));
}

Complex ml(const MLParams& p, Complex z);
double ml(const MLParams& p, double x);

// Individual methods, exposed for crossover testing. Each returns its own
// error estimate; none of them throws on poor accuracy.
MLValue ml_series(const MLParams& p, Complex z);
MLValue ml_asymptotic(const MLParams& p, Complex z);
MLValue ml_contour(const MLParams& p, Complex z);

/// J^tau of s -> e^{lambda s} at t by product integration on an n-step grid
/// (first) versus t^tau E_{1,tau+1}(lambda t) (second).
std::pair<Complex, Complex> ml_frac_integral_identity(double tau, Complex lambda, double t,
                                                      Index n_steps = 4096);

struct SectorSample {
  double t;
  Complex lambda;
};

/// sup over samples of |E_{1,tau}(lambda t)| (1 + |lambda t|). Every sample must
/// satisfy sigma <= |arg lambda| <= pi.
double ml_sector_bound_margin(double tau, double sigma, std::span<const SectorSample> samples);

}  // namespace fracop
