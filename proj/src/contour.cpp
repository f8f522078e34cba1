#include "fracop/contour.hpp"

#include "fracop/parallel.hpp"
#include "fracop/quadrature.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace fracop {

const char* to_string(Segment s) {
  switch (s) {
    case Segment::RayLower:
      return "ray-lower";
    case Segment::Arc:
      return "arc";
    case Segment::RayUpper:
      return "ray-upper";
  }
  return "unknown";
}

namespace {

struct RayRule {
  std::vector<double> rho;
  std::vector<double> w;
};

// Quadrature for int_r^{rho_max} g(rho) d rho.
RayRule ray_rule(double r, double rho_max, const PathOptions& opt) {
  RayRule out;
  const GaussRule& gl = gauss_legendre(opt.n_ray);
  if (opt.plain_rays) {
    const double half = 0.5 * (rho_max - r);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      out.rho.push_back(r + half * (gl.nodes[k] + 1.0));
      out.w.push_back(half * gl.weights[k]);
    }
    return out;
  }
  const double s_max = std::log(rho_max / r);
  const int panels = std::max(1, static_cast<int>(std::ceil(s_max / opt.max_panel_width)));
  const double width = s_max / panels;
  for (int p = 0; p < panels; ++p) {
    const double s0 = p * width;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double s = s0 + 0.5 * width * (gl.nodes[k] + 1.0);
      const double rho = r * std::exp(s);
      out.rho.push_back(rho);
      out.w.push_back(0.5 * width * gl.weights[k] * rho);
    }
  }
  return out;
}

ContourPath assemble(double r, double gamma, double rho_max, const PathOptions& opt) {
  if (opt.n_ray < 1 || opt.n_arc < 1) {
    throw DomainError("contour: node counts must be positive");
  }
  ContourPath path;
  path.gamma = gamma;
  path.arc_radius = r;
  path.rho_max = rho_max;
  const RayRule ray = ray_rule(r, rho_max, opt);
  const Complex down = std::polar(1.0, -gamma);
  const Complex up = std::polar(1.0, gamma);
  // Lower ray, traversed inward: d lambda = e^{-i gamma} d rho with rho decreasing.
  for (std::size_t k = ray.rho.size(); k-- > 0;) {
    path.nodes.push_back(ray.rho[k] * down);
    path.weights.push_back(-ray.w[k] * down);
    path.segments.push_back(Segment::RayLower);
  }
  const GaussRule& gl = gauss_legendre(opt.n_arc);
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    const double theta = gamma * gl.nodes[k];
    const Complex lambda = std::polar(r, theta);
    path.nodes.push_back(lambda);
    path.weights.push_back(gamma * gl.weights[k] * kI * lambda);
    path.segments.push_back(Segment::Arc);
  }
  for (std::size_t k = 0; k < ray.rho.size(); ++k) {
    path.nodes.push_back(ray.rho[k] * up);
    path.weights.push_back(ray.w[k] * up);
    path.segments.push_back(Segment::RayUpper);
  }
  return path;
}

void check_gamma(double gamma) {
  if (!(gamma > kPi / 2.0 && gamma < kPi)) {
    throw DomainError("contour: gamma must lie in (pi/2, pi)");
  }
}

}  // namespace

ContourPath build_paper_path(double t, double gamma, double tol, const PathOptions& opt) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("build_paper_path: t must be positive");
  }
  if (!(tol > 0.0 && tol < 1.0)) {
    throw DomainError("build_paper_path: tol must lie in (0,1)");
  }
  check_gamma(gamma);
  const double delta = -std::cos(gamma);
  const double r = 1.0 / t;
  const double rho_max = std::log(1.0 / tol) / (t * delta);
  return assemble(r, gamma, std::max(rho_max, r * (1.0 + 1e-12)), opt);
}

ContourPath build_fixed_path(double epsilon, double gamma, double rho_max, const PathOptions& opt) {
  check_gamma(gamma);
  if (!(epsilon > 0.0) || !(epsilon < rho_max)) {
    throw DomainError("build_fixed_path: need 0 < epsilon < rho_max");
  }
  return assemble(epsilon, gamma, rho_max, opt);
}

double fixed_path_epsilon(double T, std::optional<double> min_abs_eigenvalue, double alpha) {
  if (!(T > 0.0) || !(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("fixed_path_epsilon: need T > 0 and alpha in (0,1]");
  }
  double eps = 1.0 / T;
  if (min_abs_eigenvalue) {
    eps = std::min(eps, std::pow(*min_abs_eigenvalue, 1.0 / alpha) / 10.0);
  }
  return eps;
}

double fixed_path_rho_max(double t_min, double gamma, double tol) {
  check_gamma(gamma);
  if (!(t_min > 0.0) || !(tol > 0.0 && tol < 1.0)) {
    throw DomainError("fixed_path_rho_max: need t_min > 0 and tol in (0,1)");
  }
  return std::log(1.0 / tol) / (t_min * -std::cos(gamma));
}

CVector pairwise_sum(const std::vector<CVector>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) {
    return terms[lo];
  }
  if (hi - lo == 2) {
    return terms[lo] + terms[lo + 1];
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

CVector contour_integrate(const ContourPath& path, const std::function<CVector(Complex)>& f) {
  if (path.size() == 0) {
    throw DomainError("contour_integrate: empty path");
  }
  std::vector<CVector> terms(path.size());
  parallel_for(path.size(), [&](std::size_t j) {
    CVector v = f(path.nodes[j]);
    if (!v.allFinite()) {
      std::ostringstream msg;
      msg << "contour_integrate: non-finite integrand at node " << j << " (lambda = " << path.nodes[j]
          << ", " << to_string(path.segments[j]) << ")";
      throw NumericError(msg.str());
    }
    terms[j] = path.weights[j] * v;
  });
  const Index dim = terms.front().size();
  for (const CVector& t : terms) {
    if (t.size() != dim) {
      throw DomainError("contour_integrate: integrand changed dimension");
    }
  }
  return pairwise_sum(terms, 0, terms.size());
}

void write_path_csv(std::ostream& os, const ContourPath& path) {
  os << "segment,re_lambda,im_lambda,re_w,im_w\n";
  char buf[64];
  auto put = [&](double x) {
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    os << ',';
    os.write(buf, res.ptr - buf);
  };
  for (std::size_t j = 0; j < path.size(); ++j) {
    os << to_string(path.segments[j]);
    put(path.nodes[j].real());
    put(path.nodes[j].imag());
    put(path.weights[j].real());
    put(path.weights[j].imag());
    os << '\n';
  }
}

}  // namespace fracop
