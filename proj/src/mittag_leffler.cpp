#include "fracop/mittag_leffler.hpp"

#include "fracop/fractional_calculus.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace fracop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  static void add(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  void operator+=(Complex z) {
    add(re, cre, z.real());
    add(im, cim, z.imag());
  }
  Complex value() const { return {re + cre, im + cim}; }
};

// log|Gamma(x)| and sign(Gamma(x)) for real x off the poles.
std::pair<double, double> log_abs_gamma(double x) {
  const double lg = std::lgamma(x);
  double sign = 1.0;
  if (x < 0.0) {
    const double n = std::ceil(-x);
    sign = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
  }
  return {lg, sign};
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// mag * e^{i k theta}; exact signs on the real axis.
Complex phased(double mag, int k, double theta, bool real_axis) {
  if (real_axis) {
    return {(theta != 0.0 && k % 2 != 0) ? -mag : mag, 0.0};
  }
  return std::polar(mag, k * theta);
}

}  // namespace

const char* to_string(MLMethod m) {
  switch (m) {
    case MLMethod::Series:
      return "series";
    case MLMethod::Asymptotic:
      return "asymptotic";
    case MLMethod::Contour:
      return "contour";
  }
  return "unknown";
}

double ml_default_tolerance(Complex z) { return std::abs(z) <= 50.0 ? 1e-12 : 1e-9; }

MLValue ml_series(const MLParams& p, Complex z) {
  const double a = p.a1;
  const double b = p.a2;
  if (z == Complex(0.0, 0.0)) {
    const double v = rgamma(b);
    return {Complex(v, 0.0), kEps * std::abs(v), MLMethod::Series};
  }
  const double logr = std::log(std::abs(z));
  const double theta = std::arg(z);
  const bool real_axis = z.imag() == 0.0;
  CompensatedSum sum;
  double rounding = 0.0;
  double last_mag = std::numeric_limits<double>::infinity();
  double truncation = std::numeric_limits<double>::infinity();
  constexpr int kMaxTerms = 20000;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double x = a * k + b;
    if (is_nonpositive_integer(x)) {
      continue;
    }
    const auto [lg, sign] = log_abs_gamma(x);
    const double logmag = k * logr - lg;
    if (logmag > 700.0) {
      return {Complex(std::numeric_limits<double>::quiet_NaN(), 0.0),
              std::numeric_limits<double>::infinity(), MLMethod::Series};
    }
    const double mag = std::exp(logmag);
    const Complex term = phased(sign * mag, k, theta, real_axis);
    sum += term;
    rounding += mag * kEps * (4.0 + std::abs(k * logr) + std::abs(lg) + std::abs(k * theta));
    const double s_abs = std::abs(sum.value());
    // Terms decay monotonically once (a k + b)^a outgrows |z|; stop when the
    // remaining geometric tail is below rounding.
    if (x > 1.0 && std::isfinite(last_mag) && mag < last_mag) {
      const double ratio = mag / last_mag;
      if (ratio < 0.9) {
        const double tail = mag * ratio / (1.0 - ratio);
        if (tail < 0.1 * kEps * s_abs || mag == 0.0) {
          truncation = tail;
          break;
        }
      }
    }
    last_mag = mag;
  }
  const Complex v = sum.value();
  return {v, rounding + truncation, MLMethod::Series};
}

MLValue ml_asymptotic(const MLParams& p, Complex z) {
  const double a = p.a1;
  const double b = p.a2;
  const double r = std::abs(z);
  if (r == 0.0) {
    return {Complex(0.0, 0.0), std::numeric_limits<double>::infinity(), MLMethod::Asymptotic};
  }
  const double logr = std::log(r);
  const double theta = std::arg(z);
  const bool real_axis = z.imag() == 0.0;
  CompensatedSum sum;
  double rounding = 0.0;

  // Exponential contributions from every sheet with -a pi < arg + 2 pi j <= a pi.
  const int jmin = static_cast<int>(std::floor((-a * kPi - theta) / (2.0 * kPi)));
  const int jmax = static_cast<int>(std::ceil((a * kPi - theta) / (2.0 * kPi)));
  for (int j = jmin; j <= jmax; ++j) {
    const double phase = theta + 2.0 * kPi * j;
    if (!(phase > -a * kPi && phase <= a * kPi)) {
      continue;
    }
    const Complex log_s(logr / a, phase / a);
    const Complex s = std::exp(log_s);
    const Complex term = std::exp((1.0 - b) * log_s + s) / a;
    sum += term;
    rounding += std::abs(term) * kEps * (4.0 + std::abs(s) + std::abs((1.0 - b) * log_s));
  }

  // Divergent algebraic series, truncated at its smallest term. The decision
  // uses the envelope |1/Gamma(x)| <= Gamma(1-x)/pi for x < 0, since the sine
  // factor can make single coefficients accidentally tiny.
  double prev = std::numeric_limits<double>::infinity();
  double truncation = 0.0;
  constexpr int kMaxTerms = 400;
  // With integer parameters every coefficient past b - a k <= 0 vanishes.
  const bool exact_zeros = a == std::floor(a) && b == std::floor(b);
  int k = 1;
  for (; k <= kMaxTerms; ++k) {
    const double x = b - a * k;
    if (exact_zeros && x <= 0.0) {
      truncation = 0.0;
      break;
    }
    const double log_env = x > 0.0 ? -std::lgamma(x) : std::lgamma(1.0 - x) - std::log(kPi);
    const double env = std::exp(-k * logr + log_env);
    if (env >= prev) {
      truncation = prev;
      break;
    }
    prev = env;
    if (!is_nonpositive_integer(x)) {
      const auto [lg, sign] = log_abs_gamma(x);
      const double logmag = -k * logr - lg;
      const double mag = std::exp(logmag);
      sum += phased(-sign * mag, -k, theta, real_axis);
      rounding += mag * kEps * (4.0 + std::abs(k * logr) + std::abs(lg) + std::abs(k * theta));
    }
    if (env < 0.1 * kEps * std::abs(sum.value())) {
      truncation = env;
      break;
    }
  }
  if (k > kMaxTerms) {
    truncation = prev;
  }
  return {sum.value(), rounding + truncation, MLMethod::Asymptotic};
}

namespace {

// Optimal parabolic-contour parameters for the trapezoidal inversion of the
// Laplace transform s^{a-b}/(s^a - z), following Garrappa's error balancing
// between discretization, truncation and round-off.
struct ContourParams {
  double mu = 0.0;
  double h = 0.0;
  double n = std::numeric_limits<double>::infinity();
};

ContourParams optimal_param_bounded(double t, double phi_j, double phi_j1, double pj, double qj,
                                    double log_epsilon) {
  const double log_eps = std::log(kEps);
  const double fac = 1.01;
  const double f_max = std::exp(log_epsilon - log_eps);
  const double sq_phi_j = std::sqrt(phi_j);
  const double threshold = 2.0 * std::sqrt((log_epsilon - log_eps) / t);
  const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);

  double sq_bar_j = 0.0;
  double sq_bar_j1 = 0.0;
  double f_bar = 1.0;
  bool admissible = false;
  if (pj < 1e-14 && qj < 1e-14) {
    sq_bar_j = sq_phi_j;
    sq_bar_j1 = sq_phi_j1;
    admissible = true;
  } else if (pj < 1e-14) {
    sq_bar_j = sq_phi_j;
    const double f_min = sq_phi_j > 0.0 ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), qj) : fac;
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fq = std::pow(f_bar, -1.0 / qj);
      sq_bar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
      admissible = true;
    }
  } else if (qj < 1e-14) {
    sq_bar_j1 = sq_phi_j1;
    const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), pj);
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      sq_bar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
      admissible = true;
    }
  } else {
    double f_min = fac * (sq_phi_j + sq_phi_j1) / std::pow(sq_phi_j1 - sq_phi_j, std::max(pj, qj));
    if (f_min < f_max) {
      f_min = std::max(f_min, 1.5);
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      const double fq = std::pow(f_bar, -1.0 / qj);
      const double w = -phi_j1 * t / log_epsilon;
      const double den = 2.0 + w - (1.0 + w) * fp + fq;
      sq_bar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
      sq_bar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
      admissible = true;
    }
  }
  ContourParams out;
  if (!admissible) {
    return out;
  }
  const double le = log_epsilon - std::log(f_bar);
  const double w = -sq_bar_j1 * sq_bar_j1 * t / le;
  out.mu = std::pow(((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w), 2);
  out.h = -2.0 * kPi / le * (sq_bar_j1 - sq_bar_j) / ((1.0 + w) * sq_bar_j + sq_bar_j1);
  out.n = std::ceil(std::sqrt(1.0 - le / t / out.mu) / out.h);
  return out;
}

ContourParams optimal_param_unbounded(double t, double phi_j, double pj, double log_epsilon) {
  const double sq_phi_j = std::sqrt(phi_j);
  double phibar = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
  double sq_phibar = std::sqrt(phibar);
  const double f_min = 1.0;
  const double f_max = 10.0;
  const double f_tar = 5.0;
  double nj = 0.0;
  double big_a = 0.0;
  double sq_mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double phi_t = phibar * t;
    const double log_eps_phi_t = log_epsilon / phi_t;
    nj = std::ceil(phi_t / kPi * (1.0 - 1.5 * log_eps_phi_t + std::sqrt(1.0 - 2.0 * log_eps_phi_t)));
    big_a = kPi * nj / phi_t;
    sq_mu = sq_phibar * std::abs(4.0 - big_a) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * big_a));
    const double fbar = std::pow((sq_phibar - sq_phi_j) / sq_mu, -pj);
    if (pj < 1e-14 || (f_min < fbar && fbar < f_max)) {
      break;
    }
    sq_phibar = std::pow(f_tar, -1.0 / pj) * sq_mu + sq_phi_j;
    phibar = sq_phibar * sq_phibar;
  }
  ContourParams out;
  out.mu = sq_mu * sq_mu;
  out.h = (-3.0 * big_a - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * big_a)) / (4.0 - big_a) / nj;
  out.n = nj;
  const double log_eps = std::log(kEps);
  const double threshold = (log_epsilon - log_eps) / t;
  if (out.mu > threshold) {
    const double q = std::abs(pj) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / pj) * std::sqrt(out.mu);
    const double pb = std::pow(q + sq_phi_j, 2);
    if (pb < threshold) {
      const double w = std::sqrt(log_eps / (log_eps - log_epsilon));
      const double u = std::sqrt(-pb * t / log_eps);
      out.mu = threshold;
      out.n = std::ceil(w * log_epsilon / 2.0 / kPi / (u * w - 1.0));
      out.h = std::sqrt(log_eps / (log_eps - log_epsilon)) / out.n;
    } else {
      out.n = std::numeric_limits<double>::infinity();
      out.h = 0.0;
    }
  }
  return out;
}

}  // namespace

MLValue ml_contour(const MLParams& p, Complex z) {
  const double a = p.a1;
  const double b = p.a2;
  const double t = 1.0;
  double log_epsilon = std::log(1e-15);

  // Singularities s* = z^{1/a} e^{2 pi i k / a} on the principal sheet.
  const double theta = std::arg(z);
  const double r = std::abs(z);
  std::vector<Complex> poles;
  if (r > 0.0) {
    const int kmin = static_cast<int>(std::ceil(-a / 2.0 - theta / (2.0 * kPi)));
    const int kmax = static_cast<int>(std::floor(a / 2.0 - theta / (2.0 * kPi)));
    for (int k = kmin; k <= kmax; ++k) {
      poles.push_back(std::pow(r, 1.0 / a) * std::exp(kI * ((theta + 2.0 * k * kPi) / a)));
    }
  }
  std::vector<std::pair<double, Complex>> sorted;
  for (const Complex& s : poles) {
    const double phi = 0.5 * (s.real() + std::abs(s));
    if (phi > 1e-15) {
      sorted.emplace_back(phi, s);
    }
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Complex> s_star{Complex(0.0, 0.0)};
  std::vector<double> phi_star{0.0};
  for (const auto& [phi, s] : sorted) {
    s_star.push_back(s);
    phi_star.push_back(phi);
  }
  const std::size_t j1 = s_star.size();
  std::vector<double> pp(j1, 1.0);
  std::vector<double> qq(j1, 1.0);
  pp[0] = std::max(0.0, -2.0 * (a - b + 1.0));
  qq[j1 - 1] = std::numeric_limits<double>::infinity();
  phi_star.push_back(std::numeric_limits<double>::infinity());

  ContourParams best;
  std::size_t best_region = 0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    best = ContourParams{};
    for (std::size_t j = 0; j < j1; ++j) {
      const bool admissible = phi_star[j] < (log_epsilon - std::log(kEps)) / t &&
                              phi_star[j] < phi_star[j + 1];
      if (!admissible) {
        continue;
      }
      const ContourParams cp =
          j + 1 < j1 ? optimal_param_bounded(t, phi_star[j], phi_star[j + 1], pp[j], qq[j], log_epsilon)
                     : optimal_param_unbounded(t, phi_star[j], pp[j], log_epsilon);
      if (cp.n < best.n) {
        best = cp;
        best_region = j;
      }
    }
    if (best.n <= 200.0) {
      break;
    }
    log_epsilon += std::log(10.0);
  }
  if (!std::isfinite(best.n)) {
    return {Complex(std::numeric_limits<double>::quiet_NaN(), 0.0),
            std::numeric_limits<double>::infinity(), MLMethod::Contour};
  }

  const int n = static_cast<int>(best.n);
  CompensatedSum sum;
  double abs_sum = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double u = best.h * k;
    const Complex s = best.mu * std::pow(Complex(1.0, u), 2);
    const Complex ds = best.mu * Complex(-2.0 * u, 2.0);
    const Complex log_s = std::log(s);
    const Complex f = std::exp((a - b) * log_s + s * t) / (std::exp(a * log_s) - z) * ds;
    sum += f;
    abs_sum += std::abs(f);
  }
  Complex value = best.h * sum.value() / (2.0 * kPi * kI);
  // The parameter choice balances discretization and truncation against the
  // size of the integrand, so both scale with its absolute mass.
  const double mass = best.h * abs_sum / (2.0 * kPi);
  double err = (std::exp(log_epsilon) + 4.0 * kEps) * mass;

  // Residues of poles lying to the right of the chosen region.
  for (std::size_t j = best_region + 1; j < j1; ++j) {
    const Complex s = s_star[j];
    const Complex res = std::exp((1.0 - b) * std::log(s) + s * t) / a;
    value += res;
    err += 4.0 * kEps * std::abs(res) * (1.0 + std::abs(s));
  }
  return {value, err, MLMethod::Contour};
}

MLValue ml_evaluate(const MLParams& p, Complex z, double rel_tol) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("ml: argument must be finite");
  }
  const bool real_input = z.imag() == 0.0;
  auto finish = [real_input](MLValue v) {
    if (real_input) {
      v.value = Complex(v.value.real(), 0.0);
    }
    return v;
  };
  auto accepted = [rel_tol](const MLValue& v) {
    return std::isfinite(v.value.real()) && std::isfinite(v.value.imag()) &&
           v.error_estimate <= rel_tol * std::abs(v.value);
  };

  MLValue best{Complex(0.0, 0.0), std::numeric_limits<double>::infinity(), MLMethod::Series};
  auto consider = [&best](const MLValue& v) {
    const double rel = v.error_estimate / std::abs(v.value);
    const double best_rel = best.error_estimate / std::abs(best.value);
    if (std::isfinite(rel) && !(rel >= best_rel)) {
      best = v;
    }
  };

  // The series is only attempted where it cannot overflow or lose everything
  // to cancellation; each method's own error estimate makes the final call.
  if (std::abs(z) <= 60.0) {
    MLValue s = ml_series(p, z);
    if (accepted(s)) {
      return finish(s);
    }
    consider(s);
  }
  MLValue asym = ml_asymptotic(p, z);
  if (accepted(asym)) {
    return finish(asym);
  }
  consider(asym);
  MLValue c = ml_contour(p, z);
  if (accepted(c)) {
    return finish(c);
  }
  consider(c);
  const double achieved = best.error_estimate / std::abs(best.value);
  std::ostringstream msg;
  msg << "ml: E_{" << p.a1 << "," << p.a2 << "}(" << z.real() << (z.imag() < 0 ? "" : "+")
      << z.imag() << "i) reached relative error " << achieved << " > requested " << rel_tol;
  throw ToleranceError(msg.str(), achieved);
}

Complex ml(const MLParams& p, Complex z) { return ml_evaluate(p, z).value; }

double ml(const MLParams& p, double x) { return ml_evaluate(p, Complex(x, 0.0)).value.real(); }

std::pair<Complex, Complex> ml_frac_integral_identity(double tau, Complex lambda, double t,
                                                      Index n_steps) {
  if (!(t > 0.0)) {
    throw DomainError("ml_frac_integral_identity: t must be positive");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("ml_frac_integral_identity: tau must lie in (0,1]");
  }
  // Product integration evaluated at the last node only.
  const TimeGrid grid = TimeGrid::uniform(t, n_steps);
  CompensatedSum acc;
  for (Index j = 0; j < n_steps; ++j) {
    const auto w = detail::product_weights(t - grid[j + 1], t - grid[j], tau);
    acc += w.left * std::exp(lambda * grid[j]) + w.right * std::exp(lambda * grid[j + 1]);
  }
  const Complex lhs = rgamma(tau) * acc.value();
  const Complex rhs = std::pow(t, tau) * ml_evaluate(MLParams(1.0, tau + 1.0), lambda * t, 1e-10).value;
  return {lhs, rhs};
}

double ml_sector_bound_margin(double tau, double sigma, std::span<const SectorSample> samples) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("ml_sector_bound_margin: tau must lie in (0,1]");
  }
  if (!(sigma > kPi / 2.0 && sigma < kPi)) {
    throw DomainError("ml_sector_bound_margin: sigma must lie in (pi/2, pi)");
  }
  const MLParams params(1.0, tau);
  double sup = 0.0;
  for (const SectorSample& s : samples) {
    if (!(s.t >= 0.0) || s.lambda == Complex(0.0, 0.0) ||
        std::abs(std::arg(s.lambda)) < sigma) {
      throw DomainError("ml_sector_bound_margin: sample outside the sector sigma <= |arg| <= pi");
    }
    const Complex z = s.lambda * s.t;
    const double v = std::abs(ml_evaluate(params, z, 1e-9).value) * (1.0 + std::abs(z));
    sup = std::max(sup, v);
  }
  return sup;
}

}  // namespace fracop
