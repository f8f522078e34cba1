#pragma once

#include "fracop/contour.hpp"
#include "fracop/fractional_calculus.hpp"
#include "fracop/operators.hpp"

#include <optional>
#include <span>

namespace fracop {

enum class PathKind { Paper, Fixed };

struct QuadratureConfig {
  PathKind path = PathKind::Paper;
  PathOptions nodes;
  /// Truncation tolerance: the rays stop where |e^{lambda t}| drops below tol
  /// (exponential weights) or where the algebraic tail of a Mittag-Leffler
  /// weight drops below tol relative to the arc scale.
  double tol = 1e-12;
  /// Sector half-angle of the path; defaults to the operator's sector.
  std::optional<double> gamma;
};

enum class WeightKind {
  G,       // e^{lambda t} lambda^{alpha-1}
  K,       // e^{lambda t}
  Gprime,  // e^{lambda t} lambda^alpha
  dJtauG,  // t^{tau-1} E_{1,tau}(lambda t) lambda^{alpha-1}
  JbetaG,  // t^beta E_{1,beta+1}(lambda t) lambda^{alpha-1}
};

struct OperatorWeight {
  WeightKind kind = WeightKind::G;
  /// tau for dJtauG, beta for JbetaG.
  double param = 0.0;

  static OperatorWeight G() { return {WeightKind::G, 0.0}; }
  static OperatorWeight K() { return {WeightKind::K, 0.0}; }
  static OperatorWeight Gprime() { return {WeightKind::Gprime, 0.0}; }
  static OperatorWeight dJtauG(double tau);
  static OperatorWeight JbetaG(double beta);

  /// Scalar factor multiplying (lambda^alpha - A)^{-1} a in the integrand.
  Complex operator()(Complex lambda, double t, double alpha) const;
  /// True if the weight decays exponentially along the rays.
  bool exponential() const;
};

const char* to_string(WeightKind k);

/// The path the operator family uses at time t under the given configuration.
ContourPath solution_path(const SectorialOperator& op, const OperatorWeight& w, double t,
                          const QuadratureConfig& quad);

/// (1/2 pi i) int_Gamma weight(lambda, t) (lambda^alpha - A)^{-1} a d lambda.
CVector apply_operator(const SectorialOperator& op, const FractionalOrder& order,
                       const OperatorWeight& weight, double t, const CVector& a,
                       const QuadratureConfig& quad = {});

CVector apply_G(const SectorialOperator& op, const FractionalOrder& order, double t, const CVector& a,
                const QuadratureConfig& quad = {});
CVector apply_K(const SectorialOperator& op, const FractionalOrder& order, double t, const CVector& a,
                const QuadratureConfig& quad = {});
CVector apply_Gprime(const SectorialOperator& op, const FractionalOrder& order, double t,
                     const CVector& a, const QuadratureConfig& quad = {});
CVector apply_dJtauG(const SectorialOperator& op, const FractionalOrder& order, double tau, double t,
                     const CVector& a, const QuadratureConfig& quad = {});
CVector apply_JbetaG(const SectorialOperator& op, const FractionalOrder& order, double beta, double t,
                     const CVector& a, const QuadratureConfig& quad = {});

/// weight applied at every node of a grid (t_0 = 0 gets the limit: a for G,
/// left zero for the singular kinds). Each positive time uses its own path.
GridFunction<Complex> operator_trajectory(const SectorialOperator& op, const FractionalOrder& order,
                                          const OperatorWeight& weight, const TimeGrid& grid,
                                          const CVector& a, const QuadratureConfig& quad = {});

}  // namespace fracop
