#include "fracop/inverse_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace fracop {

void ObservationSpec::validate(Index dim, bool allow_full) const {
  if (omega.empty()) {
    throw DomainError("observation: omega is empty");
  }
  std::set<Index> seen;
  for (Index w : omega) {
    if (w < 0 || w >= dim) {
      throw DomainError("observation: omega index " + std::to_string(w) + " outside [0, " + std::to_string(dim) +
                        ")");
    }
    if (!seen.insert(w).second) {
      throw DomainError("observation: duplicate omega index " + std::to_string(w));
    }
  }
  if (!allow_full && static_cast<Index>(omega.size()) >= dim) {
    throw DomainError("observation: omega must be a proper subset of the state indices");
  }
  if (obs_times.empty()) {
    throw DomainError("observation: no observation times");
  }
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    if (!(obs_times[i] > 0.0) || (i > 0 && !(obs_times[i] > obs_times[i - 1]))) {
      throw DomainError("observation: times must be positive and strictly increasing");
    }
  }
  if (!(noise_level >= 0.0)) {
    throw DomainError("observation: noise_level must be >= 0");
  }
}

std::vector<Index> ObservationSpec::middle_third(Index dim) {
  std::vector<Index> out;
  for (Index i = dim / 3; i < dim - dim / 3; ++i) {
    out.push_back(i);
  }
  return out;
}

std::vector<double> ObservationSpec::log_times(double t_first, double T, Index n) {
  if (!(t_first > 0.0 && T > t_first) || n < 2) {
    throw DomainError("log_times: need 0 < t_first < T and n >= 2");
  }
  std::vector<double> t(static_cast<std::size_t>(n));
  const double lr = std::log(T / t_first) / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = t_first * std::exp(lr * static_cast<double>(i));
  }
  t.back() = T;
  return t;
}

RVector ObservationData::stacked() const { return Eigen::Map<const RVector>(values.data(), values.size()); }

ObservationData observe(const GridFunction<Complex>& u, const ObservationSpec& spec, std::uint64_t seed,
                        bool allow_full) {
  spec.validate(u.dim(), allow_full);
  const TimeGrid& grid = u.grid();
  const auto& nodes = grid.nodes();
  ObservationData data;
  data.values.resize(static_cast<Index>(spec.omega.size()), static_cast<Index>(spec.obs_times.size()));
  for (std::size_t i = 0; i < spec.obs_times.size(); ++i) {
    const double t = spec.obs_times[i];
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), t * (1.0 - 1e-12));
    if (it == nodes.end() || std::abs(*it - t) > 1e-12 * t) {
      std::ostringstream os;
      os << "observe: time " << t << " is not a grid node";
      throw DomainError(os.str());
    }
    const Index col = it - nodes.begin();
    for (std::size_t w = 0; w < spec.omega.size(); ++w) {
      data.values(static_cast<Index>(w), static_cast<Index>(i)) = u[col](spec.omega[w]).real();
    }
  }
  data.seed = seed;
  data.noise_level = spec.noise_level;
  if (spec.noise_level > 0.0) {
    data.noise_sigma = spec.noise_level * data.values.cwiseAbs().maxCoeff();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Index j = 0; j < data.values.cols(); ++j) {
      for (Index i = 0; i < data.values.rows(); ++i) {
        data.values(i, j) += data.noise_sigma * g(rng);
      }
    }
  }
  return data;
}

bool ObservationMap::ill_posed() const { return !(sigma_min() >= 1e-10 * sigma_max()); }

ObservationMap observation_map(const SectorialOperator& op, const FractionalOrder& order,
                               const ObservationSpec& spec, const QuadratureConfig& quad, bool allow_full) {
  const Index dim = op.dim();
  spec.validate(dim, allow_full);
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), spec.obs_times.begin(), spec.obs_times.end());
  const LinearPropagator prop(op, order, TimeGrid(nodes), quad);
  const Index nw = static_cast<Index>(spec.omega.size());
  const Index nt = static_cast<Index>(spec.obs_times.size());
  ObservationMap map;
  map.matrix.resize(nw * nt, dim);
  ObservationSpec clean = spec;
  clean.noise_level = 0.0;
  for (Index j = 0; j < dim; ++j) {
    const GridFunction<Complex> g = prop.homogeneous(CVector(CVector::Unit(dim, j)));
    map.matrix.col(j) = observe(g, clean, 0, allow_full).stacked();
  }
  const Eigen::JacobiSVD<RMatrix> svd(map.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  map.u = svd.matrixU();
  map.v = svd.matrixV();
  map.singular_values = RVector::Zero(dim);
  map.singular_values.head(svd.singularValues().size()) = svd.singularValues();
  return map;
}

Reconstruction reconstruct_initial(const ObservationMap& map, const ObservationData& data, double reg) {
  if (!(reg >= 0.0)) {
    throw DomainError("reconstruct_initial: reg must be >= 0");
  }
  const RVector d = data.stacked();
  if (d.size() != map.matrix.rows()) {
    throw DomainError("reconstruct_initial: data size does not match the observation map");
  }
  if (reg == 0.0 && map.sigma_min() < 1e-10) {
    std::ostringstream os;
    os << "reconstruct_initial: sigma_min = " << map.sigma_min() << " < 1e-10; regularization required";
    throw IllPosedError(os.str(), map.sigma_min());
  }
  const RVector c = map.u.transpose() * d;
  RVector y(c.size());
  for (Index k = 0; k < c.size(); ++k) {
    const double s = map.singular_values(k);
    y(k) = s > 0.0 ? s * c(k) / (s * s + reg) : 0.0;
  }
  Reconstruction rec;
  rec.a = map.v * y;
  rec.reg = reg;
  rec.residual_norm = (map.matrix * rec.a - d).norm();
  rec.solution_norm = rec.a.norm();
  rec.discrepancy = data.noise_sigma > 0.0
                        ? rec.residual_norm / (data.noise_sigma * std::sqrt(static_cast<double>(d.size())))
                        : 0.0;
  return rec;
}

LCurve l_curve(const ObservationMap& map, const ObservationData& data, const std::vector<double>& regs,
               const std::optional<RVector>& truth) {
  if (regs.size() < 3) {
    throw DomainError("l_curve: need at least 3 regularization values");
  }
  LCurve out;
  for (double reg : regs) {
    if (!(reg > 0.0)) {
      throw DomainError("l_curve: regularization values must be positive");
    }
    const Reconstruction rec = reconstruct_initial(map, data, reg);
    LCurvePoint p{reg, rec.residual_norm, rec.solution_norm, std::nullopt};
    if (truth) {
      p.relative_error = (rec.a - *truth).norm() / truth->norm();
    }
    out.points.push_back(p);
  }
  // Discrete curvature of the parametric curve (log rho, log eta) in log reg.
  const std::size_t n = out.points.size();
  std::vector<double> x(n);
  std::vector<double> y(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(std::max(out.points[i].residual_norm, 1e-300));
    y[i] = std::log(std::max(out.points[i].solution_norm, 1e-300));
    s[i] = std::log(out.points[i].reg);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = s[i] - s[i - 1];
    const double h2 = s[i + 1] - s[i];
    const double dx = (x[i + 1] - x[i - 1]) / (h1 + h2);
    const double dy = (y[i + 1] - y[i - 1]) / (h1 + h2);
    const double ddx = 2.0 * ((x[i + 1] - x[i]) / h2 - (x[i] - x[i - 1]) / h1) / (h1 + h2);
    const double ddy = 2.0 * ((y[i + 1] - y[i]) / h2 - (y[i] - y[i - 1]) / h1) / (h1 + h2);
    const double denom = std::pow(dx * dx + dy * dy, 1.5);
    const double kappa = denom > 0.0 ? (dx * ddy - ddx * dy) / denom : 0.0;
    if (kappa > best) {
      best = kappa;
      out.corner = i;
    }
  }
  return out;
}

}  // namespace fracop
