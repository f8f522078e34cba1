#include "fracop/evolution_solver.hpp"

#include "fracop/mittag_leffler.hpp"
#include "fracop/parallel.hpp"

#include <sstream>

namespace fracop {

ForcingTerm ForcingTerm::samples(GridFunction<Complex> f) {
  ForcingTerm out;
  out.samples_ = std::move(f);
  return out;
}

ForcingTerm ForcingTerm::samples(const GridFunction<double>& f) { return samples(to_complex(f)); }

ForcingTerm ForcingTerm::callback(std::function<CVector(double)> f) {
  if (!f) {
    throw DomainError("ForcingTerm: empty callback");
  }
  ForcingTerm out;
  out.callback_ = std::move(f);
  return out;
}

GridFunction<Complex> ForcingTerm::sample(const TimeGrid& grid, Index dim) const {
  GridFunction<Complex> out(grid, dim);
  if (samples_) {
    if (!(samples_->grid() == grid) || samples_->dim() != dim) {
      throw DomainError("ForcingTerm: samples do not match the solver grid/dimension");
    }
    out = *samples_;
  } else if (callback_) {
    out = GridFunction<Complex>::sample(grid, dim, callback_);
  }
  if (!out.values().allFinite()) {
    throw DomainError("ForcingTerm: non-finite forcing sample");
  }
  return out;
}

LinearPropagator::LinearPropagator(const SectorialOperator& op, const FractionalOrder& order, TimeGrid grid,
                                   const QuadratureConfig& quad)
    : op_(op), order_(order), grid_(std::move(grid)) {
  const double gamma = quad.gamma.value_or(op.sector().gamma);
  const double eps = fixed_path_epsilon(grid_.final_time(), op.min_spectral_modulus(), order_.alpha());
  const double rho_max = fixed_path_rho_max(grid_.min_step(), gamma, quad.tol);
  path_ = build_fixed_path(eps, gamma, std::max(rho_max, 2.0 * eps), quad.nodes);
  const double alpha = order_.alpha();
  z_.resize(path_.size());
  factors_.resize(path_.size());
  parallel_for(path_.size(), [&](std::size_t j) {
    z_[j] = principal_pow(path_.nodes[j], alpha);
    factors_[j] = op_.factorize(z_[j]);
  });
}

GridFunction<Complex> LinearPropagator::homogeneous(const CVector& a) const {
  if (a.size() != op_.dim()) {
    throw DomainError("homogeneous: dimension mismatch");
  }
  const double alpha = order_.alpha();
  std::vector<CVector> x(path_.size());
  parallel_for(path_.size(), [&](std::size_t j) {
    x[j] = path_.weights[j] * principal_pow(path_.nodes[j], alpha - 1.0) * factors_[j]->solve(a);
  });
  GridFunction<Complex> out(grid_, op_.dim());
  out[0] = a;
  std::vector<CVector> terms(path_.size());
  for (Index i = 1; i < grid_.size(); ++i) {
    const double t = grid_[i];
    for (std::size_t j = 0; j < path_.size(); ++j) {
      terms[j] = std::exp(path_.nodes[j] * t) * x[j];
    }
    out[i] = pairwise_sum(terms, 0, terms.size()) / (2.0 * kPi * kI);
  }
  if (!out.values().allFinite()) {
    throw NumericError("homogeneous: non-finite trajectory");
  }
  return out;
}

GridFunction<Complex> LinearPropagator::duhamel(const GridFunction<Complex>& f, double kernel_power) const {
  if (!(f.grid() == grid_) || f.dim() != op_.dim()) {
    throw DomainError("duhamel: forcing does not match the propagator grid/dimension");
  }
  const Index dim = op_.dim();
  const std::size_t m = path_.size();
  // With v_j(t) = int_0^t e^{lambda_j (t - s)} F(s) ds for the piecewise-linear
  // F, the integrand uses w_j = v_j + F(t)/lambda + F'(t-)/lambda^2. The added
  // terms integrate to zero against lambda^p (lambda^alpha - A)^{-1}, and w
  // decays exponentially on the rays. Across one interval it changes only
  // through the jump in slope: w <- e^{lambda h} (w + (m_new - m_old)/lambda^2).
  std::vector<CVector> w(m);
  std::vector<Complex> scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    scale[j] = path_.weights[j] * principal_pow(path_.nodes[j], kernel_power);
    w[j] = f[0] / path_.nodes[j];
  }
  GridFunction<Complex> out(grid_, dim);
  std::vector<CVector> terms(m);
  CVector slope_old = (f[1] - f[0]) / grid_.step(0);
  for (Index i = 0; i + 1 < grid_.size(); ++i) {
    const double h = grid_.step(i);
    const CVector slope = (f[i + 1] - f[i]) / h;
    const CVector jump = i == 0 ? slope : CVector(slope - slope_old);
    parallel_for(m, [&](std::size_t j) {
      const Complex lambda = path_.nodes[j];
      w[j] = std::exp(lambda * h) * (w[j] + jump / (lambda * lambda));
      terms[j] = scale[j] * factors_[j]->solve(w[j]);
    });
    out[i + 1] = pairwise_sum(terms, 0, m) / (2.0 * kPi * kI);
    slope_old = slope;
  }
  if (!out.values().allFinite()) {
    throw NumericError("duhamel: non-finite trajectory");
  }
  return out;
}

namespace {

double sup_diff(const GridFunction<Complex>& a, const GridFunction<Complex>& b) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    s = std::max(s, (a[i] - b[i]).norm());
  }
  return s;
}

// sup_t t^{1-alpha} ||K(t)||, from the spectrum when it is known.
double kernel_constant(const SectorialOperator& op, const FractionalOrder& order, const TimeGrid& grid) {
  const double alpha = order.alpha();
  const Eigendecomposition* e = op.eigen();
  if (e == nullptr) {
    return op.sector().c_bound * rgamma(alpha);
  }
  double c = 0.0;
  for (Index i = 1; i < grid.size(); ++i) {
    const double ta = std::pow(grid[i], alpha);
    for (Index k = 0; k < e->values.size(); ++k) {
      c = std::max(c, std::abs(ml(MLParams(alpha, alpha), e->values(k) * ta)));
    }
  }
  return c;
}

std::vector<double> theoretical_factors(double c, const FractionalOrder& order, double T, int n) {
  const double alpha = order.alpha();
  const double base = c * std::tgamma(alpha) * std::pow(T, alpha);
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) {
    out.push_back(std::exp(k * std::log(base) - std::lgamma(k * alpha + 1.0)));
  }
  return out;
}

double tail_contraction(const std::vector<double>& ratios) {
  double r = 0.0;
  const std::size_t start = ratios.size() > 3 ? ratios.size() - 3 : 0;
  for (std::size_t k = start; k < ratios.size(); ++k) {
    r = std::max(r, ratios[k]);
  }
  return r;
}

void push_increment(SolveReport& rep, double d) {
  if (!rep.increments.empty() && rep.increments.back() > 0.0) {
    rep.ratios.push_back(d / rep.increments.back());
  }
  rep.increments.push_back(d);
}

}  // namespace

SolveReport solve_linear(const SectorialOperator& op, const FractionalOrder& order, const CVector& a,
                         const ForcingTerm& f, const TimeGrid& grid, const QuadratureConfig& quad) {
  if (a.size() != op.dim() || !a.allFinite()) {
    throw DomainError("solve_linear: initial value has wrong dimension or non-finite entries");
  }
  const LinearPropagator prop(op, order, grid, quad);
  SolveReport rep{prop.homogeneous(a)};
  if (!f.is_zero()) {
    rep.trajectory += prop.duhamel(f.sample(grid, op.dim()));
  }
  rep.iterations = 1;
  return rep;
}

SolveReport solve_shifted(const SectorialOperator& op0, double c0, const FractionalOrder& order,
                          const CVector& a, const ForcingTerm& f, const TimeGrid& grid, double tol,
                          int max_iter, const QuadratureConfig& quad) {
  if (a.size() != op0.dim() || !a.allFinite()) {
    throw DomainError("solve_shifted: initial value has wrong dimension or non-finite entries");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw DomainError("solve_shifted: need tol > 0 and max_iter >= 1");
  }
  const LinearPropagator prop(op0, order, grid, quad);
  const GridFunction<Complex> base = prop.homogeneous(a);
  const GridFunction<Complex> fs = f.sample(grid, op0.dim());
  const GridFunction<Complex> forced = f.is_zero() ? GridFunction<Complex>(grid, op0.dim()) : prop.duhamel(fs);

  SolveReport rep{base + forced};
  rep.iterations = 1;
  push_increment(rep, rep.trajectory.sup_norm());
  const double c_k = std::abs(c0) * kernel_constant(op0, order, grid);
  while (c0 != 0.0 && rep.increments.back() > tol) {
    if (rep.iterations >= max_iter) {
      throw ConvergenceError("solve_shifted: no convergence within " + std::to_string(max_iter) + " iterations",
                             rep.increments);
    }
    GridFunction<Complex> next = base + forced + prop.duhamel(c0 * rep.trajectory);
    push_increment(rep, sup_diff(next, rep.trajectory));
    rep.trajectory = std::move(next);
    ++rep.iterations;
  }
  rep.contraction = tail_contraction(rep.ratios);
  rep.theoretical_factors = theoretical_factors(c_k, order, grid.final_time(), rep.iterations);
  return rep;
}

double domain_norm(const SectorialOperator& op, double gamma_exp, const CVector& v, bool* substituted) {
  if (gamma_exp == 0.0) {
    return v.norm();
  }
  if (op.eigen() == nullptr) {
    if (substituted != nullptr) {
      *substituted = true;
    }
    return v.norm();
  }
  return fractional_power_apply(op, gamma_exp, v).norm();
}

SolveReport solve_semilinear(const SectorialOperator& op, const FractionalOrder& order, const CVector& a,
                             const NonlinearForcing& f, const TimeGrid& grid, const SemilinearOptions& opt) {
  if (!f.map) {
    throw DomainError("solve_semilinear: empty nonlinearity");
  }
  if (a.size() != op.dim() || !a.allFinite()) {
    throw DomainError("solve_semilinear: initial value has wrong dimension or non-finite entries");
  }
  if (!(opt.gamma_exp >= 0.0 && opt.gamma_exp < 1.0)) {
    throw DomainError("solve_semilinear: gamma must lie in [0,1)");
  }
  if (!(opt.tol > 0.0) || opt.max_iter < 1 || opt.patience < 1) {
    throw DomainError("solve_semilinear: need tol > 0, max_iter >= 1, patience >= 1");
  }
  const LinearPropagator prop(op, order, grid, opt.quad);
  const GridFunction<Complex> base = prop.homogeneous(a);

  SolveReport rep{opt.initial_guess ? *opt.initial_guess : base};
  if (!(rep.trajectory.grid() == grid) || rep.trajectory.dim() != op.dim()) {
    throw DomainError("solve_semilinear: initial guess does not match grid/dimension");
  }

  auto check_ball = [&](const GridFunction<Complex>& u, int iter) {
    for (Index i = 0; i < u.size(); ++i) {
      const double n = domain_norm(op, opt.gamma_exp, u[i], &rep.norm_substituted);
      if (!(n <= f.radius)) {
        std::ostringstream msg;
        msg << "solve_semilinear: iterate " << iter << " leaves the ball at t = " << grid[i]
            << " (norm " << n << " > M = " << f.radius << ")";
        throw BallViolationError(msg.str(), n, f.radius);
      }
    }
  };
  check_ball(rep.trajectory, 0);

  int bad = 0;
  while (true) {
    GridFunction<Complex> fu(grid, op.dim());
    for (Index i = 0; i < grid.size(); ++i) {
      CVector val = f.map(grid[i], CVector(rep.trajectory[i]));
      if (val.size() != op.dim() || !val.allFinite()) {
        throw NumericError("solve_semilinear: nonlinearity returned a bad value at t = " +
                           std::to_string(grid[i]));
      }
      fu[i] = val;
    }
    GridFunction<Complex> next = base + prop.duhamel(fu);
    ++rep.iterations;
    check_ball(next, rep.iterations);
    push_increment(rep, sup_diff(next, rep.trajectory));
    rep.trajectory = std::move(next);
    if (rep.increments.back() <= opt.tol) {
      break;
    }
    if (!rep.ratios.empty() && rep.ratios.back() >= 1.0) {
      if (++bad >= opt.patience) {
        throw ContractionError("solve_semilinear: iteration does not contract (ratio >= 1); reduce T", rep.ratios);
      }
    } else {
      bad = 0;
    }
    if (rep.iterations >= opt.max_iter) {
      throw ConvergenceError("solve_semilinear: no convergence within " + std::to_string(opt.max_iter) +
                                 " iterations",
                             rep.increments);
    }
  }
  rep.contraction = tail_contraction(rep.ratios);
  rep.theoretical_factors =
      theoretical_factors(f.lipschitz * kernel_constant(op, order, grid), order, grid.final_time(), rep.iterations);
  if (rep.norm_substituted) {
    rep.note = "operator has no eigendecomposition: ball checked in the l2 norm";
  }
  return rep;
}

GridFunction<Complex> equation_residual(const SectorialOperator& op, const FractionalOrder& order,
                                        const GridFunction<Complex>& u, const CVector& a,
                                        const GridFunction<Complex>& f) {
  GridFunction<Complex> r = caputo_l1(u.minus_constant(a), order);
  for (Index i = 1; i < u.size(); ++i) {
    r[i] -= op.apply(CVector(u[i])) + f[i];
  }
  r[0].setZero();
  return r;
}

}  // namespace fracop
