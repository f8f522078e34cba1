#pragma once

#include "fracop/core.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fracop {

enum class Segment { RayLower, Arc, RayUpper };

const char* to_string(Segment s);

/// Quadrature for a path running from infinity e^{-i gamma} inward along a
/// ray, around the arc |lambda| = r, and out along the ray at +gamma, so that
/// int_Gamma f(lambda) d lambda ~ sum_j weights[j] f(nodes[j]).
struct ContourPath {
  std::vector<Complex> nodes;
  std::vector<Complex> weights;
  std::vector<Segment> segments;
  double gamma = 0.0;
  double arc_radius = 0.0;
  double rho_max = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct PathOptions {
  int n_ray = 48;
  int n_arc = 32;
  /// Widest log-range exp(s) covered by one Gauss-Legendre panel on a ray.
  double max_panel_width = 4.0;
  /// Gauss-Legendre directly in rho instead of rho = r e^s (test fixture).
  bool plain_rays = false;
};

/// Arc radius 1/t, rays to rho_max = ln(1/tol) / (t delta), delta = -cos gamma.
ContourPath build_paper_path(double t, double gamma, double tol, const PathOptions& opt = {});

/// t-independent path: arc radius epsilon, rays to rho_max.
ContourPath build_fixed_path(double epsilon, double gamma, double rho_max, const PathOptions& opt = {});

/// Arc radius for the fixed path: min(1/T, min|mu|^{1/alpha}/10), or 1/T
/// without spectral information.
double fixed_path_epsilon(double T, std::optional<double> min_abs_eigenvalue, double alpha = 1.0);
/// Ray length for the fixed path: the t-dependent truncation rule applied at the
/// smallest time that will be evaluated.
/// time that will be evaluated.
double fixed_path_rho_max(double t_min, double gamma, double tol);

/// sum_j w_j f(lambda_j), evaluated over nodes in parallel and summed pairwise
/// in a fixed order. A non-finite value raises NumericError naming the node.
CVector contour_integrate(const ContourPath& path, const std::function<CVector(Complex)>& f);

/// Deterministic pairwise sum of terms[lo, hi).
CVector pairwise_sum(const std::vector<CVector>& terms, std::size_t lo, std::size_t hi);

/// CSV with columns segment,re_lambda,im_lambda,re_w,im_w.
void write_path_csv(std::ostream& os, const ContourPath& path);

}  // namespace fracop
