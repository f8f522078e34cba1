#include "fracop/solution_operators.hpp"

#include "fracop/mittag_leffler.hpp"
#include "fracop/parallel.hpp"

namespace fracop {

OperatorWeight OperatorWeight::dJtauG(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("dJtauG: tau must lie in (0,1]");
  }
  return {WeightKind::dJtauG, tau};
}

OperatorWeight OperatorWeight::JbetaG(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("JbetaG: beta must lie in [0,1]");
  }
  return {WeightKind::JbetaG, beta};
}

bool OperatorWeight::exponential() const {
  switch (kind) {
    case WeightKind::dJtauG:
      return param == 1.0;
    case WeightKind::JbetaG:
      return param == 0.0;
    default:
      return true;
  }
}

Complex OperatorWeight::operator()(Complex lambda, double t, double alpha) const {
  switch (kind) {
    case WeightKind::G:
      return std::exp(lambda * t) * principal_pow(lambda, alpha - 1.0);
    case WeightKind::K:
      return std::exp(lambda * t);
    case WeightKind::Gprime:
      return std::exp(lambda * t) * principal_pow(lambda, alpha);
    case WeightKind::dJtauG: {
      const Complex e = param == 1.0 ? std::exp(lambda * t)
                                     : ml_evaluate(MLParams(1.0, param), lambda * t, 1e-10).value;
      return std::pow(t, param - 1.0) * e * principal_pow(lambda, alpha - 1.0);
    }
    case WeightKind::JbetaG: {
      const Complex e = param == 0.0 ? std::exp(lambda * t)
                                     : ml_evaluate(MLParams(1.0, param + 1.0), lambda * t, 1e-10).value;
      return std::pow(t, param) * e * principal_pow(lambda, alpha - 1.0);
    }
  }
  return 0.0;
}

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::G:
      return "G";
    case WeightKind::K:
      return "K";
    case WeightKind::Gprime:
      return "Gprime";
    case WeightKind::dJtauG:
      return "dJtauG";
    case WeightKind::JbetaG:
      return "JbetaG";
  }
  return "unknown";
}

ContourPath solution_path(const SectorialOperator& op, const OperatorWeight& w, double t,
                          const QuadratureConfig& quad) {
  const double gamma = quad.gamma.value_or(op.sector().gamma);
  double rho_max = fixed_path_rho_max(t, gamma, quad.tol);
  if (!w.exponential()) {
    // Mittag-Leffler weights decay only like 1/(lambda t) on the rays.
    rho_max = std::max(rho_max, 1.0 / (t * quad.tol));
  }
  if (quad.path == PathKind::Paper) {
    return build_fixed_path(1.0 / t, gamma, rho_max, quad.nodes);
  }
  const double eps = fixed_path_epsilon(t, op.min_spectral_modulus());
  return build_fixed_path(eps, gamma, std::max(rho_max, 2.0 * eps), quad.nodes);
}

CVector apply_operator(const SectorialOperator& op, const FractionalOrder& order,
                       const OperatorWeight& weight, double t, const CVector& a,
                       const QuadratureConfig& quad) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("apply_operator: t must be positive");
  }
  if (a.size() != op.dim()) {
    throw DomainError("apply_operator: dimension mismatch");
  }
  const double alpha = order.alpha();
  const ContourPath path = solution_path(op, weight, t, quad);
  const CVector integral = contour_integrate(path, [&](Complex lambda) {
    const Complex z = principal_pow(lambda, alpha);
    return CVector(weight(lambda, t, alpha) * op.resolvent_solve(z, a));
  });
  return integral / (2.0 * kPi * kI);
}

CVector apply_G(const SectorialOperator& op, const FractionalOrder& order, double t, const CVector& a,
                const QuadratureConfig& quad) {
  return apply_operator(op, order, OperatorWeight::G(), t, a, quad);
}

CVector apply_K(const SectorialOperator& op, const FractionalOrder& order, double t, const CVector& a,
                const QuadratureConfig& quad) {
  return apply_operator(op, order, OperatorWeight::K(), t, a, quad);
}

CVector apply_Gprime(const SectorialOperator& op, const FractionalOrder& order, double t,
                     const CVector& a, const QuadratureConfig& quad) {
  return apply_operator(op, order, OperatorWeight::Gprime(), t, a, quad);
}

CVector apply_dJtauG(const SectorialOperator& op, const FractionalOrder& order, double tau, double t,
                     const CVector& a, const QuadratureConfig& quad) {
  return apply_operator(op, order, OperatorWeight::dJtauG(tau), t, a, quad);
}

CVector apply_JbetaG(const SectorialOperator& op, const FractionalOrder& order, double beta, double t,
                     const CVector& a, const QuadratureConfig& quad) {
  return apply_operator(op, order, OperatorWeight::JbetaG(beta), t, a, quad);
}

GridFunction<Complex> operator_trajectory(const SectorialOperator& op, const FractionalOrder& order,
                                          const OperatorWeight& weight, const TimeGrid& grid,
                                          const CVector& a, const QuadratureConfig& quad) {
  GridFunction<Complex> out(grid, op.dim());
  if (weight.kind == WeightKind::G || (weight.kind == WeightKind::dJtauG && weight.param == 1.0)) {
    out[0] = a;
  }
  for (Index i = 1; i < grid.size(); ++i) {
    out[i] = apply_operator(op, order, weight, grid[i], a, quad);
  }
  return out;
}

}  // namespace fracop
