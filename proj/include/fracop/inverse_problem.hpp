#pragma once

#include "fracop/evolution_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracop {

/// Which state components are seen (omega, a proper non-empty subset) at which
/// positive times.
struct ObservationSpec {
  std::vector<Index> omega;
  std::vector<double> obs_times;
  /// Standard deviation of the additive noise relative to max |observation|.
  double noise_level = 0.0;

  /// Throws DomainError unless omega is non-empty, duplicate-free, inside
  /// [0, dim) and not the full index set (allow_full lifts the last rule), and
  /// the times are positive and strictly increasing.
  void validate(Index dim, bool allow_full = false) const;
  /// Index set {lo, ..., hi} covering the middle third of 0..dim-1.
  static std::vector<Index> middle_third(Index dim);
  /// n times log-spaced in [t_first, T].
  static std::vector<double> log_times(double t_first, double T, Index n);
};

struct ObservationData {
  /// Column i holds u(t_i) restricted to omega.
  RMatrix values;
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  /// Absolute standard deviation of the added noise.
  double noise_sigma = 0.0;

  /// vec(values): time-major stacking, matching the rows of the observation map.
  RVector stacked() const;
};

/// Restriction of a trajectory to omega at the observation times (which must
/// be nodes of u's grid) plus seeded i.i.d. Gaussian noise.
ObservationData observe(const GridFunction<Complex>& u, const ObservationSpec& spec, std::uint64_t seed,
                        bool allow_full = false);

struct ObservationMap {
  /// Rows (time i, omega entry w) at i |omega| + w; column j is the response to e_j.
  RMatrix matrix;
  /// Singular values in decreasing order; missing ones (fewer rows than
  /// columns) are reported as zero.
  RVector singular_values;
  RMatrix u;
  RMatrix v;

  double sigma_min() const { return singular_values(singular_values.size() - 1); }
  double sigma_max() const { return singular_values(0); }
  /// sigma_min below 1e-10 sigma_max.
  bool ill_posed() const;
};

/// Matrix of a -> vec(u(t_i)|omega) for the homogeneous problem, one solve per
/// basis vector, with its SVD.
ObservationMap observation_map(const SectorialOperator& op, const FractionalOrder& order,
                               const ObservationSpec& spec, const QuadratureConfig& quad = {},
                               bool allow_full = false);

struct Reconstruction {
  RVector a;
  double reg = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  /// residual_norm / (noise_sigma sqrt(rows)); near 1 at the discrepancy principle.
  double discrepancy = 0.0;
};

/// argmin ||M a - d||^2 + reg ||a||^2 through the SVD. Throws IllPosedError for
/// reg = 0 when sigma_min < 1e-10.
Reconstruction reconstruct_initial(const ObservationMap& map, const ObservationData& data, double reg);

struct LCurvePoint {
  double reg = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  /// Relative error against a known truth, when supplied.
  std::optional<double> relative_error;
};

struct LCurve {
  std::vector<LCurvePoint> points;
  /// Index of maximal curvature of (log residual, log norm).
  std::size_t corner = 0;
};

LCurve l_curve(const ObservationMap& map, const ObservationData& data, const std::vector<double>& regs,
               const std::optional<RVector>& truth = std::nullopt);

}  // namespace fracop
