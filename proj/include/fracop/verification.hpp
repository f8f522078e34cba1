#pragma once

#include "fracop/evolution_solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fracop {

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

/// Least-squares fit of log(value) against log(t) over a window.
struct SlopeFit {
  double t_min = 0.0;
  double t_max = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  /// The log-values vary by less than 1% over the window: any power law with
  /// a slope in the band fits, and r2 is reported as 1.
  bool flat = false;
  double expected = 0.0;
  double band = 0.05;
  /// Equality of slopes (saturating data) or a one-sided lower bound.
  bool two_sided = true;
  std::vector<double> t;
  std::vector<double> values;
  Verdict verdict = Verdict::Inconclusive;
};

/// Fits and judges: Inconclusive when r2 < 0.99 or the window spans under two
/// decades, otherwise Pass iff |slope - expected| <= band (two-sided) or
/// slope >= expected - band (one-sided).
SlopeFit fit_slope(std::vector<double> t, std::vector<double> values, double expected, double band = 0.05,
                   bool two_sided = true);

struct EstimateReport {
  std::string name;
  /// (abscissa, value) pairs: times, grid sizes or lambdas depending on the check.
  std::vector<std::pair<double, double>> samples;
  /// Empirical sup, deviation or slope.
  double value = 0.0;
  bool stable = false;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct ReferenceSolution {
  GridFunction<Complex> trajectory;
  /// Mittag-Leffler evaluation error bound per eigenmode (absolute, summed over nodes).
  RVector mode_error;
};

/// Spectral solution u = sum_k [E_{alpha,1}(mu_k t^alpha)(a, phi_k) + (k_mu * F_k)(t)] phi_k,
/// with the scalar convolutions integrated exactly against the piecewise-linear
/// interpolant of F through the primitives s^alpha E_{alpha,alpha+1} and
/// s^{alpha+1} E_{alpha,alpha+2}. Throws UnsupportedOperatorError without an
/// eigendecomposition.
ReferenceSolution eigen_expansion_solution(const SectorialOperator& op, const FractionalOrder& order,
                                           const CVector& a, const ForcingTerm& f, const TimeGrid& grid);

/// Numerical Laplace transform of G(.)a sampled on a geometric grid out to
/// t_big, compared with lambda^{alpha-1}(lambda^alpha - A)^{-1} a. Pass iff the
/// max relative deviation is <= target; Inconclusive when a truncation tail
/// exceeds 0.1 target.
EstimateReport check_laplace_identity(const SectorialOperator& op, const FractionalOrder& order,
                                      const CVector& a, const std::vector<Complex>& lambdas, double t_big,
                                      double target = 1e-5, Index nodes = 6000, double t_first = 1e-12);

enum class Probe {
  GSmoothing,   // ||(-A)^beta G(t)||      ~ t^{-alpha beta}
  KBound,       // ||(-A)^beta K(t)||      ~ t^{alpha(1-beta)-1}
  GprimeBound,  // ||(-A)^beta G'(t)||     ~ t^{-alpha beta-1}
  DJtauGBound,  // ||(-A)^beta d/dt J^tau G(t)|| ~ t^{tau-alpha beta-1}
  JbetaGGrowth, // ||J^beta G(t)||         ~ t^{beta}
  Decay,        // ||G(t) a|| for large t  ~ t^{-alpha}
};
const char* to_string(Probe p);
Probe probe_from_string(const std::string& s);

struct SlopeParams {
  double beta = 0.0;
  double tau = 0.5;
  /// Window; zero means the saturation window of the spectrum (small-t
  /// probes) or [10, 1000] (Decay).
  double t_min = 0.0;
  double t_max = 0.0;
  Index samples = 20;
  /// Test vector. Empty: for self-adjoint operators the eigenvectors, taking
  /// the largest response per t (the operator norm, which saturates the bound);
  /// otherwise the normalized a_k = 1/k expansion.
  CVector a;
  double band = 0.05;
  /// Saturation window in y = |mu| t^alpha: y_N >= y_low and y_1 <= y_high.
  double y_low = 3.0;
  double y_high = 0.03;
  QuadratureConfig quad;
};

/// Theoretical exponent of the probe.
double expected_slope(Probe p, const FractionalOrder& order, const SlopeParams& params);

/// Saturation window [t_min, t_max] for the spectrum of op.
std::pair<double, double> saturation_window(const SectorialOperator& op, const FractionalOrder& order,
                                            const SlopeParams& params);

SlopeFit check_estimate_slope(Probe probe, const SectorialOperator& op, const FractionalOrder& order,
                              const SlopeParams& params = {});

/// sup over node pairs with |s - t| >= 4h of ||A u(s) - A u(t)|| / |s - t|^sigma
/// for u = solve_linear(0, F) on uniform grids with n, 2n, 4n steps. Stable iff
/// the last two refinements change the quotient by at most 10%. Throws
/// HypothesisError if F(0) != 0.
EstimateReport check_holder_regularity(const SectorialOperator& op, const FractionalOrder& order, double sigma,
                                       const ForcingTerm& f, double T, Index n, int refinements = 2,
                                       const QuadratureConfig& quad = {});

/// caputo_l1 of the Duhamel term int K(t-s)F(s)ds against int G(t-s)F'(s)ds
/// on uniform grids with n, 2n, ... steps. The sup discrepancy is taken over
/// [T/4, T]; Pass iff it decreases under every refinement.
EstimateReport check_duhamel_identity(const SectorialOperator& op, const FractionalOrder& order,
                                      const ForcingTerm& f, const ForcingTerm& fprime, double T, Index n,
                                      int refinements = 2, const QuadratureConfig& quad = {});

/// A (int_0^t K(xi) a d xi) = G(t) a - a with the integral of the sampled K by
/// product integration against xi^{alpha-1}. Returns the sup discrepancy per
/// grid of the sequence; Pass iff it decreases and the last value <= target.
EstimateReport check_integrated_kernel_identity(const SectorialOperator& op, const FractionalOrder& order,
                                                const CVector& a, const std::vector<TimeGrid>& grids,
                                                double target, const QuadratureConfig& quad = {});

/// sup over t in [window_start T, T] of the equation residual on uniform
/// grids with n, 2n, 4n steps. Pass iff both refinements reduce it with
/// empirical order >= 1 - alpha.
EstimateReport check_residual_convergence(const SectorialOperator& op, const FractionalOrder& order,
                                          const CVector& a, const ForcingTerm& f, double T, Index n,
                                          double window_start = 0.25, const QuadratureConfig& quad = {});

}  // namespace fracop
