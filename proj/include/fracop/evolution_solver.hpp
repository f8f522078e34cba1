#pragma once

#include "fracop/solution_operators.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fracop {

/// Right-hand side F of the linear problem: nothing, samples on the solver
/// grid, or a callback evaluated at the grid nodes. Between nodes F is taken
/// piecewise linear.
class ForcingTerm {
public:
  static ForcingTerm zero() { return ForcingTerm(); }
  static ForcingTerm samples(GridFunction<Complex> f);
  static ForcingTerm samples(const GridFunction<double>& f);
  static ForcingTerm callback(std::function<CVector(double)> f);

  bool is_zero() const { return !samples_ && !callback_; }
  /// Values at the grid nodes; throws DomainError on non-finite samples or a
  /// grid/dimension mismatch.
  GridFunction<Complex> sample(const TimeGrid& grid, Index dim) const;

private:
  std::optional<GridFunction<Complex>> samples_;
  std::function<CVector(double)> callback_;
};

/// State-dependent forcing u -> F(t, u) with the ball radius M on which the
/// Lipschitz constant C(M) holds, measured in the D((-A)^gamma) norm.
struct NonlinearForcing {
  std::function<CVector(double, const CVector&)> map;
  double radius = std::numeric_limits<double>::infinity();
  double lipschitz = 0.0;
};

struct SolveReport {
  explicit SolveReport(GridFunction<Complex> u) : trajectory(std::move(u)) {}

  GridFunction<Complex> trajectory;
  int iterations = 0;
  /// sup_t ||u_{n+1}(t) - u_n(t)|| per iteration.
  std::vector<double> increments;
  /// Ratios increments[n] / increments[n-1].
  std::vector<double> ratios;
  /// Largest ratio over the tail of the iteration (rho-hat).
  double contraction = 0.0;
  /// Theoretical increment factors (C Gamma(alpha) T^alpha)^n / Gamma(n alpha + 1).
  std::vector<double> theoretical_factors;
  /// Set when a D((-A)^gamma) norm had to be replaced by the l2 norm.
  bool norm_substituted = false;
  std::string note;
};

/// Precomputed fixed-path quadrature for one operator, order and grid:
/// every node's resolvent factorization is built once and reused by all
/// output times and all right-hand sides.
class LinearPropagator {
public:
  /// op must outlive the propagator.
  LinearPropagator(const SectorialOperator& op, const FractionalOrder& order, TimeGrid grid,
                   const QuadratureConfig& quad = {});

  const TimeGrid& grid() const { return grid_; }
  const ContourPath& path() const { return path_; }
  const SectorialOperator& op() const { return op_; }
  const FractionalOrder& order() const { return order_; }

  /// G(t_i) a at every node (a at t = 0).
  GridFunction<Complex> homogeneous(const CVector& a) const;

  /// int_0^{t_i} S(t_i - s) F(s) ds at every node, where S has weight
  /// e^{lambda t} lambda^p: p = 0 gives K, p = alpha - 1 gives G.
  GridFunction<Complex> duhamel(const GridFunction<Complex>& f, double kernel_power = 0.0) const;

private:
  const SectorialOperator& op_;
  FractionalOrder order_;
  TimeGrid grid_;
  ContourPath path_;
  std::vector<Complex> z_;  // lambda_j^alpha
  std::vector<std::unique_ptr<ResolventFactor>> factors_;
};

/// u(t) = G(t) a + int_0^t K(t - s) F(s) ds.
SolveReport solve_linear(const SectorialOperator& op, const FractionalOrder& order, const CVector& a,
                         const ForcingTerm& f, const TimeGrid& grid, const QuadratureConfig& quad = {});

/// Picard iteration for A = A0 + c0: u_{n+1} = G0 a + K0 * (c0 u_n + F),
/// starting from u_0 = 0, until the sup increment is <= tol.
SolveReport solve_shifted(const SectorialOperator& op0, double c0, const FractionalOrder& order,
                          const CVector& a, const ForcingTerm& f, const TimeGrid& grid, double tol,
                          int max_iter, const QuadratureConfig& quad = {});

struct SemilinearOptions {
  double gamma_exp = 0.5;
  double tol = 1e-10;
  int max_iter = 100;
  /// Iterations allowed with a ratio >= 1 before giving up.
  int patience = 3;
  /// Starting trajectory; defaults to G(t) a.
  std::optional<GridFunction<Complex>> initial_guess;
  QuadratureConfig quad;
};

/// Mild solution u = G a + K * F(u) by Picard iteration on the given grid.
SolveReport solve_semilinear(const SectorialOperator& op, const FractionalOrder& order,
                             const CVector& a, const NonlinearForcing& f, const TimeGrid& grid,
                             const SemilinearOptions& opt = {});

/// ||v||_{D((-A)^gamma)} = ||(-A)^gamma v|| when an eigendecomposition is
/// available; otherwise ||v|| and substituted = true.
double domain_norm(const SectorialOperator& op, double gamma_exp, const CVector& v, bool* substituted);

/// caputo_l1(u - a) - A u - F at every node (zero at t = 0).
GridFunction<Complex> equation_residual(const SectorialOperator& op, const FractionalOrder& order,
                                        const GridFunction<Complex>& u, const CVector& a,
                                        const GridFunction<Complex>& f);

}  // namespace fracop
