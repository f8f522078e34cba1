#include "fracop/verification.hpp"

#include "fracop/mittag_leffler.hpp"
#include "fracop/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace fracop {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

const char* to_string(Probe p) {
  switch (p) {
    case Probe::GSmoothing:
      return "g-smoothing";
    case Probe::KBound:
      return "k-bound";
    case Probe::GprimeBound:
      return "gprime-bound";
    case Probe::DJtauGBound:
      return "djtau-g-bound";
    case Probe::JbetaGGrowth:
      return "jbeta-g-growth";
    case Probe::Decay:
      return "decay";
  }
  return "?";
}

Probe probe_from_string(const std::string& s) {
  for (Probe p : {Probe::GSmoothing, Probe::KBound, Probe::GprimeBound, Probe::DJtauGBound, Probe::JbetaGGrowth,
                  Probe::Decay}) {
    if (s == to_string(p)) {
      return p;
    }
  }
  throw DomainError("unknown probe '" + s + "'");
}

SlopeFit fit_slope(std::vector<double> t, std::vector<double> values, double expected, double band,
                   bool two_sided) {
  if (t.size() != values.size() || t.size() < 3) {
    throw DomainError("fit_slope: need at least 3 matching samples");
  }
  SlopeFit fit;
  const std::size_t n = t.size();
  double sx = 0.0;
  double sy = 0.0;
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DomainError("fit_slope: samples must be positive and finite");
    }
    x[i] = std::log(t[i]);
    y[i] = std::log(values[i]);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.flat = std::sqrt(syy / n) < 0.01;
  fit.r2 = fit.flat ? 1.0 : 1.0 - ss_res / syy;
  fit.t_min = *std::min_element(t.begin(), t.end());
  fit.t_max = *std::max_element(t.begin(), t.end());
  fit.expected = expected;
  fit.band = band;
  fit.two_sided = two_sided;
  fit.t = std::move(t);
  fit.values = std::move(values);
  if (fit.r2 < 0.99 || std::log10(fit.t_max / fit.t_min) < 2.0 - 1e-12) {
    fit.verdict = Verdict::Inconclusive;
  } else {
    const bool ok = two_sided ? std::abs(fit.slope - expected) <= band : fit.slope >= expected - band;
    fit.verdict = ok ? Verdict::Pass : Verdict::Fail;
  }
  return fit;
}

namespace {

bool is_uniform(const TimeGrid& grid) {
  const Index n = grid.size() - 1;
  const double T = grid.final_time();
  for (Index i = 0; i <= n; ++i) {
    if (std::abs(grid[i] - T * static_cast<double>(i) / static_cast<double>(n)) > 1e-12 * T) {
      return false;
    }
  }
  return true;
}

struct Primitive {
  double p1 = 0.0;
  double p2 = 0.0;
  double err = 0.0;
};

// P1(s) = s^alpha E_{alpha,alpha+1}(mu s^alpha), P2(s) = s^{alpha+1} E_{alpha,alpha+2}(mu s^alpha):
// the first two antiderivatives of s^{alpha-1} E_{alpha,alpha}(mu s^alpha).
Primitive primitive(double alpha, double mu, double s) {
  if (s <= 0.0) {
    return {};
  }
  const double sa = std::pow(s, alpha);
  const MLValue e1 = ml_evaluate(MLParams(alpha, alpha + 1.0), Complex(mu * sa, 0.0));
  const MLValue e2 = ml_evaluate(MLParams(alpha, alpha + 2.0), Complex(mu * sa, 0.0));
  return {sa * e1.value.real(), sa * s * e2.value.real(), sa * e1.error_estimate + sa * s * e2.error_estimate};
}

CVector normalized_harmonic(const SectorialOperator& op) {
  const Index n = op.dim();
  CVector a(n);
  if (const Eigendecomposition* e = op.eigen()) {
    RVector c(n);
    // Eigenvalues are stored in ascending order; mode 1 is the one of smallest modulus.
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
      idx[static_cast<std::size_t>(k)] = k;
    }
    std::sort(idx.begin(), idx.end(),
              [&](Index x, Index y) { return std::abs(e->values(x)) < std::abs(e->values(y)); });
    for (Index k = 0; k < n; ++k) {
      c(idx[static_cast<std::size_t>(k)]) = 1.0 / static_cast<double>(k + 1);
    }
    a = (e->vectors * c).cast<Complex>();
  } else {
    a = CVector::Ones(n);
  }
  return a / a.norm();
}

double sup_from(const GridFunction<Complex>& u, double t_start) {
  double s = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    if (u.time(i) >= t_start) {
      s = std::max(s, u[i].norm());
    }
  }
  return s;
}

GridFunction<Complex> apply_columns(const SectorialOperator& op, const GridFunction<Complex>& u) {
  GridFunction<Complex> out(u.grid(), u.dim());
  for (Index i = 0; i < u.size(); ++i) {
    out[i] = op.apply(CVector(u[i]));
  }
  return out;
}

}  // namespace

ReferenceSolution eigen_expansion_solution(const SectorialOperator& op, const FractionalOrder& order,
                                           const CVector& a, const ForcingTerm& f, const TimeGrid& grid) {
  const Eigendecomposition* e = op.eigen();
  if (!e) {
    throw UnsupportedOperatorError("eigen_expansion_solution: " + op.name() + " has no eigendecomposition");
  }
  const Index dim = op.dim();
  if (a.size() != dim) {
    throw DomainError("eigen_expansion_solution: dimension mismatch");
  }
  const double alpha = order.alpha();
  const Index n = grid.size();
  const CMatrix vt = e->vectors.transpose().cast<Complex>();
  const CVector ac = vt * a;
  const bool forced = !f.is_zero();
  CMatrix fc;
  if (forced) {
    fc = vt * f.sample(grid, dim).values();
  }
  const bool uniform = is_uniform(grid);
  const double h = grid.final_time() / static_cast<double>(n - 1);

  CMatrix coeff = CMatrix::Zero(dim, n);
  RVector mode_error = RVector::Zero(dim);
  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t kk) {
    const Index k = static_cast<Index>(kk);
    const double mu = e->values(k);
    double err = 0.0;
    coeff(k, 0) = ac(k);
    for (Index i = 1; i < n; ++i) {
      const MLValue g = ml_evaluate(MLParams(alpha, 1.0), Complex(mu * std::pow(grid[i], alpha), 0.0));
      coeff(k, i) = g.value.real() * ac(k);
      err = std::max(err, g.error_estimate * std::abs(ac(k)));
    }
    if (!forced) {
      mode_error(k) = err;
      return;
    }
    double fmax = 0.0;
    double mmax = 0.0;
    for (Index j = 0; j < n; ++j) {
      fmax = std::max(fmax, std::abs(fc(k, j)));
      if (j + 1 < n) {
        mmax = std::max(mmax, std::abs(fc(k, j + 1) - fc(k, j)) / grid.step(j));
      }
    }
    const double weight = 2.0 * fmax + 3.0 * mmax * grid.final_time();
    // On sigma in [a, b] the forcing is F_j + m (b - sigma), and sigma k(sigma)
    // has antiderivative sigma P1 - P2, so the interval contributes
    // F_j (P1(b) - P1(a)) + m (P2(b) - P2(a) - h P1(a)).
    auto interval = [&](Index j, const Primitive& pa, const Primitive& pb) {
      const double hj = grid.step(j);
      const Complex m = (fc(k, j + 1) - fc(k, j)) / hj;
      return fc(k, j) * (pb.p1 - pa.p1) + m * (pb.p2 - pa.p2 - hj * pa.p1);
    };
    if (uniform) {
      std::vector<Primitive> prim(static_cast<std::size_t>(n));
      double perr = 0.0;
      for (Index m = 1; m < n; ++m) {
        prim[static_cast<std::size_t>(m)] = primitive(alpha, mu, static_cast<double>(m) * h);
        perr = std::max(perr, prim[static_cast<std::size_t>(m)].err);
      }
      for (Index i = 1; i < n; ++i) {
        Complex acc = 0.0;
        for (Index j = 0; j < i; ++j) {
          acc += interval(j, prim[static_cast<std::size_t>(i - j - 1)], prim[static_cast<std::size_t>(i - j)]);
        }
        coeff(k, i) += acc;
      }
      err += static_cast<double>(n) * perr * weight;
    } else {
      double perr = 0.0;
      for (Index i = 1; i < n; ++i) {
        Complex acc = 0.0;
        Primitive pa = primitive(alpha, mu, 0.0);
        for (Index j = i - 1; j >= 0; --j) {
          const double b = grid[i] - grid[j];
          const Primitive pb = primitive(alpha, mu, b);
          acc += interval(j, pa, pb);
          perr = std::max(perr, pb.err);
          pa = pb;
        }
        coeff(k, i) += acc;
      }
      err += static_cast<double>(n) * perr * weight;
    }
    mode_error(k) = err;
  });
  GridFunction<Complex> u(grid, CMatrix(e->vectors.cast<Complex>() * coeff));
  return {std::move(u), std::move(mode_error)};
}

EstimateReport check_laplace_identity(const SectorialOperator& op, const FractionalOrder& order,
                                      const CVector& a, const std::vector<Complex>& lambdas, double t_big,
                                      double target, Index nodes, double t_first) {
  if (lambdas.empty()) {
    throw DomainError("check_laplace_identity: no lambda values");
  }
  EstimateReport rep;
  rep.name = "laplace-identity";
  const double alpha = order.alpha();
  const TimeGrid grid = TimeGrid::geometric(t_first, t_big, nodes);
  QuadratureConfig quad;
  quad.path = PathKind::Fixed;
  const LinearPropagator prop(op, order, grid, quad);
  const GridFunction<Complex> g = prop.homogeneous(a);
  double worst = 0.0;
  double worst_tail = 0.0;
  for (const Complex lambda : lambdas) {
    const LaplaceValue lv = numerical_laplace(g, lambda);
    const CVector ref =
        principal_pow(lambda, alpha - 1.0) * op.resolvent_solve(principal_pow(lambda, alpha), a);
    const double dev = (lv.value - ref).norm() / ref.norm();
    rep.samples.emplace_back(std::abs(lambda), dev);
    worst = std::max(worst, dev);
    worst_tail = std::max(worst_tail, lv.tail_bound / ref.norm());
  }
  rep.value = worst;
  rep.stable = worst_tail <= 0.1 * target;
  std::ostringstream os;
  os << "max relative deviation " << worst << ", tail bound " << worst_tail;
  rep.detail = os.str();
  if (!rep.stable) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = worst <= target ? Verdict::Pass : Verdict::Fail;
  }
  return rep;
}

double expected_slope(Probe p, const FractionalOrder& order, const SlopeParams& params) {
  const double alpha = order.alpha();
  const double beta = params.beta;
  switch (p) {
    case Probe::GSmoothing:
      return -alpha * beta;
    case Probe::KBound:
      return alpha * (1.0 - beta) - 1.0;
    case Probe::GprimeBound:
      return -alpha * beta - 1.0;
    case Probe::DJtauGBound:
      return params.tau - alpha * beta - 1.0;
    case Probe::JbetaGGrowth:
      return beta;
    case Probe::Decay:
      return -alpha;
  }
  return 0.0;
}

std::pair<double, double> saturation_window(const SectorialOperator& op, const FractionalOrder& order,
                                            const SlopeParams& params) {
  const std::optional<double> lo = op.min_spectral_modulus();
  if (!lo || !(*lo > 0.0)) {
    throw HypothesisError("saturation_window: smallest spectral modulus unknown");
  }
  const double hi = op.spectral_bound();
  const double ia = 1.0 / order.alpha();
  const double t_min = std::pow(params.y_low / hi, ia);
  const double t_max = std::pow(params.y_high / *lo, ia);
  if (!(t_max >= 100.0 * t_min)) {
    std::ostringstream os;
    os << "saturation window [" << t_min << ", " << t_max << "] spans under two decades; widen the spectrum";
    throw HypothesisError(os.str());
  }
  return {t_min, t_max};
}

SlopeFit check_estimate_slope(Probe probe, const SectorialOperator& op, const FractionalOrder& order,
                              const SlopeParams& params) {
  if (params.samples < 3) {
    throw DomainError("check_estimate_slope: need at least 3 samples");
  }
  const double beta = params.beta;
  if (probe != Probe::JbetaGGrowth && probe != Probe::Decay && !(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("check_estimate_slope: beta must lie in [0,1]");
  }
  double t_min = params.t_min;
  double t_max = params.t_max;
  if (t_min <= 0.0 || t_max <= 0.0) {
    if (probe == Probe::Decay) {
      t_min = 10.0;
      t_max = 1000.0;
    } else {
      std::tie(t_min, t_max) = saturation_window(op, order, params);
    }
  }
  if (!(t_max > t_min && t_min > 0.0)) {
    throw DomainError("check_estimate_slope: invalid window");
  }

  OperatorWeight w = OperatorWeight::G();
  double power = beta;
  switch (probe) {
    case Probe::GSmoothing:
    case Probe::Decay:
      break;
    case Probe::KBound:
      w = OperatorWeight::K();
      break;
    case Probe::GprimeBound:
      w = OperatorWeight::Gprime();
      break;
    case Probe::DJtauGBound:
      w = OperatorWeight::dJtauG(params.tau);
      break;
    case Probe::JbetaGGrowth:
      w = OperatorWeight::JbetaG(beta);
      break;
  }
  if (probe == Probe::JbetaGGrowth || probe == Probe::Decay) {
    power = 0.0;
  }

  const Eigendecomposition* e = op.eigen();
  const bool saturating = e && params.a.size() == 0 && probe != Probe::Decay;
  CVector a = params.a.size() ? params.a : normalized_harmonic(op);
  if (a.size() != op.dim()) {
    throw DomainError("check_estimate_slope: test vector dimension mismatch");
  }
  if (!saturating && power != 0.0 && power != 1.0 && !e) {
    throw UnsupportedOperatorError("check_estimate_slope: fractional powers need an eigendecomposition");
  }

  std::vector<double> t(static_cast<std::size_t>(params.samples));
  std::vector<double> v(t.size());
  const double lr = std::log(t_max / t_min) / static_cast<double>(params.samples - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = t_min * std::exp(lr * static_cast<double>(i));
  }
  t.back() = t_max;

  if (saturating) {
    // Every eigenvector at once: X(t) acts on phi_k as the scalar contour
    // integral with A replaced by mu_k.
    const DiagonalOperator diag(e->values, op.sector().gamma);
    const CVector ones = CVector::Ones(op.dim());
    RVector scale(op.dim());
    for (Index k = 0; k < op.dim(); ++k) {
      scale(k) = std::pow(std::abs(e->values(k)), power);
    }
    parallel_for(t.size(), [&](std::size_t i) {
      const CVector x = apply_operator(diag, order, w, t[i], ones, params.quad);
      v[i] = (scale.array() * x.array().abs()).maxCoeff();
    });
  } else {
    parallel_for(t.size(), [&](std::size_t i) {
      CVector x = apply_operator(op, order, w, t[i], a, params.quad);
      if (power == 1.0 && !e) {
        x = -op.apply(x);
      } else if (power != 0.0) {
        x = fractional_power_apply(op, power, x);
      }
      v[i] = x.norm();
    });
  }
  // Upper bounds only saturate on the extremal vectors; a given vector can
  // only be held to the one-sided inequality. Decay is an asymptotic equality.
  const bool two_sided = saturating || probe == Probe::Decay;
  return fit_slope(std::move(t), std::move(v), expected_slope(probe, order, params), params.band, two_sided);
}

EstimateReport check_holder_regularity(const SectorialOperator& op, const FractionalOrder& order, double sigma,
                                       const ForcingTerm& f, double T, Index n, int refinements,
                                       const QuadratureConfig& quad) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("check_holder_regularity: sigma must lie in (0,1)");
  }
  if (refinements < 1) {
    throw DomainError("check_holder_regularity: need at least one refinement");
  }
  EstimateReport rep;
  rep.name = "holder-regularity";
  const CVector zero = CVector::Zero(op.dim());
  std::vector<double> quotients;
  double separation = 0.0;
  for (int r = 0; r <= refinements; ++r) {
    const Index steps = n << r;
    const TimeGrid grid = TimeGrid::uniform(T, steps);
    const GridFunction<Complex> fs = f.sample(grid, op.dim());
    if (fs[0].norm() > 1e-14 * std::max(fs.sup_norm(), 1.0)) {
      throw HypothesisError("check_holder_regularity: forcing must vanish at t = 0");
    }
    const SolveReport sol = solve_linear(op, order, zero, ForcingTerm::samples(fs), grid, quad);
    const GridFunction<Complex> au = apply_columns(op, sol.trajectory);
    const Index np = grid.size();
    std::vector<double> row(static_cast<std::size_t>(np), 0.0);
    std::vector<double> sep(static_cast<std::size_t>(np), 0.0);
    // Pairs at least four steps apart; each row handled by one worker.
    parallel_for(static_cast<std::size_t>(np), [&](std::size_t ii) {
      const Index i = static_cast<Index>(ii);
      for (Index j = i + 4; j < np; ++j) {
        const double d = grid[j] - grid[i];
        const double q = (au[j] - au[i]).norm() / std::pow(d, sigma);
        if (q > row[ii]) {
          row[ii] = q;
          sep[ii] = d;
        }
      }
    });
    const auto at = std::max_element(row.begin(), row.end()) - row.begin();
    const double q = row[static_cast<std::size_t>(at)];
    separation = sep[static_cast<std::size_t>(at)];
    quotients.push_back(q);
    rep.samples.emplace_back(static_cast<double>(steps), q);
  }
  rep.value = quotients.back();
  bool stable = true;
  const std::size_t m = quotients.size();
  for (std::size_t r = m >= 3 ? m - 2 : 1; r < m; ++r) {
    stable = stable && std::abs(quotients[r] - quotients[r - 1]) <= 0.1 * quotients[r - 1];
  }
  rep.stable = stable;
  rep.verdict = stable ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "sigma " << sigma << ", quotients";
  for (double q : quotients) {
    os << ' ' << q;
  }
  os << "; sup attained at separation " << separation;
  rep.detail = os.str();
  return rep;
}

EstimateReport check_duhamel_identity(const SectorialOperator& op, const FractionalOrder& order,
                                      const ForcingTerm& f, const ForcingTerm& fprime, double T, Index n,
                                      int refinements, const QuadratureConfig& quad) {
  EstimateReport rep;
  rep.name = "duhamel-identity";
  std::vector<double> errs;
  for (int r = 0; r <= refinements; ++r) {
    const Index steps = n << r;
    const TimeGrid grid = TimeGrid::uniform(T, steps);
    const LinearPropagator prop(op, order, grid, quad);
    const GridFunction<Complex> fs = f.sample(grid, op.dim());
    const GridFunction<Complex> dfs = fprime.sample(grid, op.dim());
    const GridFunction<Complex> lhs = caputo_l1(prop.duhamel(fs, 0.0), order);
    // The Caputo derivative of K * F is G * F' + G(t) F(0).
    GridFunction<Complex> rhs = prop.duhamel(dfs, order.alpha() - 1.0);
    if (fs[0].norm() > 0.0) {
      rhs += prop.homogeneous(CVector(fs[0]));
    }
    const double scale = std::max(sup_from(rhs, 0.25 * T), 1e-300);
    const double err = sup_from(lhs - rhs, 0.25 * T) / scale;
    errs.push_back(err);
    rep.samples.emplace_back(static_cast<double>(steps), err);
  }
  rep.value = errs.back();
  bool decreasing = true;
  for (std::size_t r = 1; r < errs.size(); ++r) {
    decreasing = decreasing && errs[r] < errs[r - 1];
  }
  rep.stable = decreasing;
  rep.verdict = decreasing ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "relative sup discrepancy on [" << 0.25 * T << ", " << T << "]:";
  for (double e : errs) {
    os << ' ' << e;
  }
  rep.detail = os.str();
  return rep;
}

EstimateReport check_integrated_kernel_identity(const SectorialOperator& op, const FractionalOrder& order,
                                                const CVector& a, const std::vector<TimeGrid>& grids,
                                                double target, const QuadratureConfig& quad) {
  if (grids.empty()) {
    throw DomainError("check_integrated_kernel_identity: no grids");
  }
  EstimateReport rep;
  rep.name = "integrated-kernel-identity";
  const double alpha = order.alpha();
  std::vector<double> errs;
  for (const TimeGrid& grid : grids) {
    const GridFunction<Complex> k = operator_trajectory(op, order, OperatorWeight::K(), grid, a, quad);
    const GridFunction<Complex> g = operator_trajectory(op, order, OperatorWeight::G(), grid, a, quad);
    // K(xi) a = xi^{alpha-1} k(xi) with k bounded; k(0) = a / Gamma(alpha).
    GridFunction<Complex> kt(grid, op.dim());
    kt[0] = a * rgamma(alpha);
    for (Index i = 1; i < grid.size(); ++i) {
      kt[i] = std::pow(grid[i], 1.0 - alpha) * k[i];
    }
    CVector integral = CVector::Zero(op.dim());
    double err = 0.0;
    for (Index i = 1; i < grid.size(); ++i) {
      const auto hw = detail::product_weights(grid[i - 1], grid[i], alpha);
      integral += hw.right * kt[i - 1] + hw.left * kt[i];
      const CVector lhs = op.apply(integral);
      err = std::max(err, (lhs - (g[i] - a)).norm() / a.norm());
    }
    errs.push_back(err);
    rep.samples.emplace_back(static_cast<double>(grid.size() - 1), err);
  }
  rep.value = errs.back();
  bool decreasing = true;
  for (std::size_t r = 1; r < errs.size(); ++r) {
    decreasing = decreasing && errs[r] < errs[r - 1];
  }
  rep.stable = decreasing;
  rep.verdict = decreasing && errs.back() <= target ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "sup discrepancy relative to ||a||";
  for (double e : errs) {
    os << ' ' << e;
  }
  rep.detail = os.str();
  return rep;
}

EstimateReport check_residual_convergence(const SectorialOperator& op, const FractionalOrder& order,
                                          const CVector& a, const ForcingTerm& f, double T, Index n,
                                          double window_start, const QuadratureConfig& quad) {
  EstimateReport rep;
  rep.name = "residual-convergence";
  std::vector<double> res;
  for (int r = 0; r <= 2; ++r) {
    const Index steps = n << r;
    const TimeGrid grid = TimeGrid::uniform(T, steps);
    const GridFunction<Complex> fs = f.sample(grid, op.dim());
    const SolveReport sol = solve_linear(op, order, a, ForcingTerm::samples(fs), grid, quad);
    const double v = sup_from(equation_residual(op, order, sol.trajectory, a, fs), window_start * T);
    res.push_back(v);
    rep.samples.emplace_back(static_cast<double>(steps), v);
  }
  const double floor_order = 1.0 - order.alpha();
  double worst = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "sup residual on [" << window_start * T << ", " << T << "]:";
  for (double v : res) {
    os << ' ' << v;
  }
  os << "; orders";
  for (std::size_t r = 1; r < res.size(); ++r) {
    const double p = std::log2(res[r - 1] / res[r]);
    worst = std::min(worst, p);
    os << ' ' << p;
  }
  rep.value = worst;
  rep.stable = worst >= floor_order;
  rep.verdict = rep.stable ? Verdict::Pass : Verdict::Fail;
  rep.detail = os.str();
  return rep;
}

}  // namespace fracop
