#include "fracop/cli.hpp"

#include "fracop/inverse_problem.hpp"
#include "fracop/mittag_leffler.hpp"
#include "fracop/parallel.hpp"
#include "fracop/report_writer.hpp"
#include "fracop/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fracop::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

// Output directory plus the list of files written into it.
class Artifacts {
public:
  Artifacts(const OutputConfig& cfg, bool enabled) : cfg_(cfg), enabled_(enabled) {
    if (enabled_) {
      dir_ = cfg.dir.value_or("fracop-out");
      std::filesystem::create_directories(dir_);
    }
  }

  bool enabled() const { return enabled_; }
  const std::vector<std::string>& files() const { return files_; }

  void json(const std::string& name, const Json& j) {
    if (enabled_ && cfg_.wants("json")) {
      open(name) << j.dump(2) << '\n';
    }
  }
  void csv(const std::string& name, const Table& t) {
    if (enabled_ && cfg_.wants("csv")) {
      t.write_csv(open(name));
    }
  }
  template <typename Scalar>
  void trajectory(const std::string& name, const GridFunction<Scalar>& u) {
    if (enabled_ && cfg_.wants("csv")) {
      write_csv(open(name), u);
    }
  }
  void svg(const std::string& name, const Plot& p) {
    if (enabled_ && cfg_.wants("svg")) {
      p.write_svg(open(name));
    }
  }
  void manifest(const Json& j) {
    if (enabled_) {
      std::ofstream os(std::filesystem::path(dir_) / "manifest.json");
      os << j.dump(2) << '\n';
    }
  }

private:
  std::ofstream& open(const std::string& name) {
    stream_ = std::ofstream(std::filesystem::path(dir_) / name);
    if (!stream_) {
      throw std::runtime_error("cannot write " + (std::filesystem::path(dir_) / name).string());
    }
    files_.push_back(name);
    return stream_;
  }

  const OutputConfig& cfg_;
  bool enabled_;
  std::string dir_;
  std::vector<std::string> files_;
  std::ofstream stream_;
};

// Operator, order, grid and data of the configured problem.
struct Problem {
  OperatorPtr base;
  OperatorPtr op;
  FractionalOrder order{0.5};
  TimeGrid grid{std::vector<double>{0.0, 1.0}};
  CVector a;
  std::function<CVector(double)> f;
  std::function<CVector(double)> fprime;
  double f_at_zero = 0.0;
};

CVector by_modes(const SectorialOperator& op, const std::function<double(Index)>& coeff) {
  const Index n = op.dim();
  const Eigendecomposition* e = op.eigen();
  if (!e) {
    CVector v(n);
    for (Index k = 0; k < n; ++k) {
      v(k) = coeff(k);
    }
    return v;
  }
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    idx[static_cast<std::size_t>(k)] = k;
  }
  std::sort(idx.begin(), idx.end(), [&](Index x, Index y) { return std::abs(e->values(x)) < std::abs(e->values(y)); });
  RVector c = RVector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    c(idx[static_cast<std::size_t>(k)]) = coeff(k);
  }
  return (e->vectors * c).cast<Complex>();
}

CVector harmonic(const SectorialOperator& op) {
  const CVector v = by_modes(op, [](Index k) { return 1.0 / static_cast<double>(k + 1); });
  return v / v.norm();
}

CVector gaussian(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = g(rng);
  }
  return v;
}

OperatorPtr make_base(const OperatorConfig& c) {
  if (c.type == "laplacian1d") {
    return std::make_shared<DirichletLaplacian1D>(c.n, c.gamma);
  }
  if (c.type == "elliptic1d") {
    const double amp = c.amplitude;
    const double react = c.reaction;
    return std::make_shared<VariableElliptic1D>(
        c.n, [amp](double x) { return 1.0 + amp * std::sin(2.0 * kPi * x); }, [react](double) { return react; },
        c.gamma);
  }
  if (c.type == "scalar") {
    return std::make_shared<DiagonalOperator>(DiagonalOperator::scalar(c.mu, c.gamma));
  }
  return std::make_shared<DiagonalOperator>(Eigen::Map<const RVector>(c.values.data(), static_cast<Index>(c.values.size())),
                                            c.gamma);
}

TimeGrid make_grid(const ProblemConfig& p) {
  if (p.grid.type == "graded") {
    return TimeGrid::graded(p.T, p.grid.n, p.grid.r);
  }
  if (p.grid.type == "geometric") {
    return TimeGrid::geometric(p.grid.t_first, p.T, p.grid.n);
  }
  return TimeGrid::uniform(p.T, p.grid.n);
}

CVector make_initial(const InitialConfig& c, const SectorialOperator& op, std::uint64_t seed) {
  const Index n = op.dim();
  CVector a;
  if (c.type == "harmonic") {
    a = harmonic(op);
  } else if (c.type == "ones") {
    a = CVector::Ones(n);
  } else if (c.type == "mode") {
    a = by_modes(op, [&](Index k) { return k + 1 == c.mode ? 1.0 : 0.0; });
  } else if (c.type == "smooth") {
    a.resize(n);
    for (Index j = 0; j < n; ++j) {
      const double x = static_cast<double>(j + 1) / static_cast<double>(n + 1);
      a(j) = x * (1.0 - x) * (1.0 + x);
    }
  } else if (c.type == "random") {
    a = gaussian(n, seed);
  } else {
    a = Eigen::Map<const RVector>(c.values.data(), n).cast<Complex>();
  }
  return c.scale * a;
}

void make_forcing(const ForcingConfig& c, Problem& p, std::uint64_t seed) {
  const Index n = p.op->dim();
  CVector b;
  if (c.profile == "harmonic") {
    b = harmonic(*p.op);
  } else if (c.profile == "random") {
    b = gaussian(n, seed + 1);
  } else {
    b = CVector::Ones(n);
  }
  b *= c.amplitude;
  const double e = c.exponent;
  if (c.type == "zero") {
    return;
  }
  if (c.type == "constant") {
    p.f = [b](double) { return b; };
    p.fprime = [n](double) { return CVector(CVector::Zero(n)); };
    p.f_at_zero = b.norm();
  } else if (c.type == "sin") {
    p.f = [b](double t) { return CVector(std::sin(t) * b); };
    p.fprime = [b](double t) { return CVector(std::cos(t) * b); };
  } else {
    p.f = [b, e](double t) { return CVector(std::pow(t, e) * b); };
    p.fprime = [b, e](double t) { return t > 0.0 ? CVector(e * std::pow(t, e - 1.0) * b) : CVector(CVector::Zero(b.size())); };
  }
}

Problem make_problem(const RunConfig& c) {
  const ProblemConfig& pc = c.problem;
  Problem p;
  p.base = make_base(pc.op);
  p.op = pc.op.shift == 0.0 ? p.base : std::make_shared<ShiftedOperator>(p.base, pc.op.shift);
  p.order = FractionalOrder(pc.alpha);
  p.grid = make_grid(pc);
  p.a = make_initial(pc.initial, *p.op, c.seed);
  make_forcing(pc.forcing, p, c.seed);
  return p;
}

ForcingTerm forcing_term(const Problem& p) { return p.f ? ForcingTerm::callback(p.f) : ForcingTerm::zero(); }

std::vector<double> node_norms(const GridFunction<Complex>& u) {
  std::vector<double> out(static_cast<std::size_t>(u.size()));
  for (Index i = 0; i < u.size(); ++i) {
    out[static_cast<std::size_t>(i)] = u[i].norm();
  }
  return out;
}

double sup_norm(const GridFunction<Complex>& u, Index from = 0) {
  double s = 0.0;
  for (Index i = from; i < u.size(); ++i) {
    s = std::max(s, u[i].norm());
  }
  return s;
}

// Real trajectories go out as real CSV, everything else as re/im pairs.
void emit_trajectory(Artifacts& art, const std::string& name, const SectorialOperator& op, const GridFunction<Complex>& u) {
  if (op.is_real() && max_imag(u) <= 1e-12 * std::max(1.0, sup_norm(u))) {
    art.trajectory(name, real_part(u));
  } else {
    art.trajectory(name, u);
  }
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << (x == 0.0 ? 0.0 : x);
  return os.str();
}

Json slope_json(const SlopeFit& f) {
  return Json{{"t_min", f.t_min},       {"t_max", f.t_max}, {"slope", f.slope},       {"intercept", f.intercept},
              {"r2", f.r2},             {"flat", f.flat},   {"expected", f.expected}, {"band", f.band},
              {"two_sided", f.two_sided}, {"verdict", to_string(f.verdict)}};
}

std::vector<double> times_of(const TimeGrid& g) { return g.nodes(); }

// ---------------------------------------------------------------- ml

int run_ml(const RunConfig& c, Artifacts& art, std::ostream& out) {
  const TaskConfig& t = c.task;
  const MLParams params(t.a1, t.a2);
  const MLValue v = t.tol ? ml_evaluate(params, t.z, *t.tol) : ml_evaluate(params, t.z);
  out << "E_{" << format_number(t.a1) << "," << format_number(t.a2) << "}(" << format_number(t.z.real());
  if (t.z.imag() != 0.0) {
    out << (t.z.imag() < 0 ? " - " : " + ") << format_number(std::abs(t.z.imag())) << "i";
  }
  out << ") = " << format_number(v.value.real());
  if (v.value.imag() != 0.0) {
    out << (v.value.imag() < 0 ? " - " : " + ") << format_number(std::abs(v.value.imag())) << "i";
  }
  out << "  (error estimate " << fixed(v.error_estimate, 3) << ", method " << to_string(v.method) << ")\n";
  art.json("ml.json", Json{{"a1", t.a1},
                           {"a2", t.a2},
                           {"z", Json::array({t.z.real(), t.z.imag()})},
                           {"value", Json::array({v.value.real(), v.value.imag()})},
                           {"error_estimate", v.error_estimate},
                           {"method", to_string(v.method)}});
  return kSuccess;
}

// ---------------------------------------------------------------- solve

int run_solve(const RunConfig& c, Artifacts& art, std::ostream& out) {
  const Problem p = make_problem(c);
  const ForcingTerm f = forcing_term(p);
  const bool shifted = c.problem.op.shift != 0.0;
  const SolveReport rep = shifted ? solve_shifted(*p.base, c.problem.op.shift, p.order, p.a, f, p.grid, 1e-10, 100,
                                                  c.quadrature)
                                  : solve_linear(*p.op, p.order, p.a, f, p.grid, c.quadrature);
  const GridFunction<Complex>& u = rep.trajectory;
  const std::vector<double> t = times_of(p.grid);
  const std::vector<double> norms = node_norms(u);

  std::vector<double> ft;
  std::vector<double> fv;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= c.task.fit_from * c.problem.T && norms[i] > 0.0) {
      ft.push_back(t[i]);
      fv.push_back(norms[i]);
    }
  }
  std::optional<SlopeFit> fit;
  if (ft.size() >= 3) {
    fit = fit_slope(ft, fv, -c.problem.alpha);
  }
  const GridFunction<Complex> res = equation_residual(*p.op, p.order, u, p.a, f.sample(p.grid, p.op->dim()));
  Index from = 0;
  while (from < u.size() && u.time(from) < 0.25 * c.problem.T) {
    ++from;
  }
  const double residual = sup_norm(res, from);

  emit_trajectory(art, "trajectory.csv", *p.op, u);
  Table nt;
  nt.add("t", t);
  nt.add("norm", norms);
  art.csv("norm.csv", nt);
  Json j{{"operator", p.op->name()},
         {"dim", p.op->dim()},
         {"alpha", c.problem.alpha},
         {"T", c.problem.T},
         {"nodes", u.size()},
         {"iterations", rep.iterations},
         {"sup_norm", sup_norm(u)},
         {"final_norm", norms.back()},
         {"max_imag", max_imag(u)},
         {"residual_sup_late", residual},
         {"decay_fit", fit ? slope_json(*fit) : Json()}};
  if (shifted) {
    j["increments"] = rep.increments;
  }
  art.json("solve.json", j);

  Plot plot{"solution norm", "t", "||u(t)||", true, true, {{"||u(t)||", t, norms, false}}, {}};
  if (fit) {
    std::vector<double> line;
    for (double x : fit->t) {
      line.push_back(std::exp(fit->intercept + fit->slope * std::log(x)));
    }
    plot.series.push_back({"fit", fit->t, line, false});
    plot.notes.push_back("fitted slope " + fixed(fit->slope) + " on [" + fixed(fit->t_min, 3) + ", " +
                         fixed(fit->t_max, 3) + "]");
    plot.notes.push_back("r2 " + fixed(fit->r2, 5));
    Table ft_table;
    ft_table.add("t", fit->t);
    ft_table.add("fit", line);
    art.csv("norm_fit.csv", ft_table);
  }
  art.svg("norm.svg", plot);

  out << "solved " << p.op->name() << " n=" << p.op->dim() << " alpha=" << format_number(c.problem.alpha) << " on "
      << u.size() << " nodes: ||u(T)|| = " << format_number(norms.back());
  if (fit) {
    out << ", decay slope " << fixed(fit->slope) << " (r2 " << fixed(fit->r2, 5) << ")";
  }
  out << ", late residual " << fixed(residual, 3) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- semilinear

int run_semilinear(const RunConfig& c, Artifacts& art, std::ostream& out) {
  const Problem p = make_problem(c);
  const TaskConfig& t = c.task;
  const double k = t.coupling;
  const std::function<CVector(double)> forcing = p.f;
  NonlinearForcing nf;
  std::function<CVector(const CVector&)> g;
  if (t.nonlinearity == "sin") {
    g = [k](const CVector& u) { return CVector(k * u.array().sin()); };
    nf.lipschitz = std::abs(k);
  } else if (t.nonlinearity == "linear") {
    g = [k](const CVector& u) { return CVector(k * u); };
    nf.lipschitz = std::abs(k);
  } else {
    if (!t.radius) {
      throw ConfigError("task.radius", "required for the cube nonlinearity");
    }
    g = [k](const CVector& u) { return CVector(k * u.array().cube()); };
    nf.lipschitz = 3.0 * std::abs(k) * *t.radius * *t.radius;
  }
  nf.map = [g, forcing](double s, const CVector& u) { return forcing ? CVector(g(u) + forcing(s)) : g(u); };
  if (t.radius) {
    nf.radius = *t.radius;
  }
  if (t.lipschitz) {
    nf.lipschitz = *t.lipschitz;
  }
  SemilinearOptions opt;
  opt.gamma_exp = t.gamma_exp;
  opt.tol = t.picard_tol;
  opt.max_iter = t.max_iter;
  opt.quad = c.quadrature;
  if (t.guess == "zero") {
    opt.initial_guess = GridFunction<Complex>(p.grid, p.op->dim());
  }
  const SolveReport rep = solve_semilinear(*p.op, p.order, p.a, nf, p.grid, opt);

  emit_trajectory(art, "trajectory.csv", *p.op, rep.trajectory);
  std::vector<double> it;
  std::vector<double> ratio;
  std::vector<double> theory;
  for (std::size_t i = 0; i < rep.increments.size(); ++i) {
    it.push_back(static_cast<double>(i + 1));
    ratio.push_back(i == 0 ? std::nan("") : rep.increments[i] / rep.increments[i - 1]);
    theory.push_back(i < rep.theoretical_factors.size() ? rep.theoretical_factors[i] : std::nan(""));
  }
  Table inc;
  inc.add("iteration", it);
  inc.add("increment", rep.increments);
  inc.add("ratio", ratio);
  inc.add("theoretical_factor", theory);
  art.csv("increments.csv", inc);
  art.json("semilinear.json", Json{{"operator", p.op->name()},
                                   {"dim", p.op->dim()},
                                   {"alpha", c.problem.alpha},
                                   {"T", c.problem.T},
                                   {"nonlinearity", t.nonlinearity},
                                   {"iterations", rep.iterations},
                                   {"contraction", rep.contraction},
                                   {"increments", rep.increments},
                                   {"theoretical_factors", rep.theoretical_factors},
                                   {"norm_substituted", rep.norm_substituted},
                                   {"note", rep.note},
                                   {"final_norm", rep.trajectory[rep.trajectory.size() - 1].norm()}});
  art.svg("increments.svg", Plot{"Picard increments", "iteration", "sup increment", false, true,
                                 {{"increment", it, rep.increments, false}, {"theoretical factor", it, theory, true}},
                                 {"contraction " + fixed(rep.contraction)}});
  out << "semilinear " << t.nonlinearity << ": " << rep.iterations << " iterations, last increment "
      << fixed(rep.increments.empty() ? 0.0 : rep.increments.back(), 3) << ", contraction " << fixed(rep.contraction)
      << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- verify

struct CheckOutcome {
  Json json;
  PlotSeries series;
  bool plotted = false;
  bool counted = true;
  Verdict verdict = Verdict::Inconclusive;
  std::string line;
};

CheckOutcome from_fit(const std::string& label, const SlopeFit& f, Json params) {
  CheckOutcome o;
  o.verdict = f.verdict;
  o.json = Json{{"check", label}, {"params", std::move(params)}};
  o.json.update(slope_json(f));
  Json samples = Json::array();
  for (std::size_t i = 0; i < f.t.size(); ++i) {
    samples.push_back(Json::array({f.t[i], f.values[i]}));
  }
  o.json["samples"] = samples;
  o.series = PlotSeries{label, f.t, f.values, false};
  o.plotted = true;
  o.line = label + ": slope " + fixed(f.slope) + " (expected " + fixed(f.expected) + ", r2 " + fixed(f.r2, 5) + ")";
  return o;
}

CheckOutcome from_report(const EstimateReport& r) {
  CheckOutcome o;
  o.verdict = r.verdict;
  Json samples = Json::array();
  for (const auto& [x, y] : r.samples) {
    samples.push_back(Json::array({x, y}));
  }
  o.json = Json{{"check", r.name},   {"value", r.value},   {"stable", r.stable},
                {"verdict", to_string(r.verdict)}, {"detail", r.detail}, {"samples", samples}};
  o.line = r.name + ": " + fixed(r.value) + " (" + r.detail + ")";
  return o;
}

CheckOutcome hypothesis_failed(const std::string& label, const std::exception& e) {
  CheckOutcome o;
  o.json = Json{{"check", label}, {"verdict", to_string(Verdict::Inconclusive)}, {"detail", e.what()}};
  o.line = label + ": " + e.what();
  return o;
}

struct CheckForcing {
  std::function<CVector(double)> f;
  std::function<CVector(double)> fprime;
  std::string name;
};

// The configured forcing, or t^0.9 ones when it is zero or (if required) F(0) != 0.
CheckForcing check_forcing(const Problem& p, bool need_zero_start) {
  if (p.f && !(need_zero_start && p.f_at_zero != 0.0)) {
    return {p.f, p.fprime, "configured"};
  }
  const Index n = p.op->dim();
  return {[n](double t) { return CVector(std::pow(t, 0.9) * CVector::Ones(n)); },
          [n](double t) { return t > 0.0 ? CVector(0.9 * std::pow(t, -0.1) * CVector::Ones(n)) : CVector(CVector::Zero(n)); },
          "t^0.9 ones"};
}

int run_verify(const RunConfig& c, Artifacts& art, std::ostream& out) {
  const Problem p = make_problem(c);
  const TaskConfig& t = c.task;
  const std::string& s = t.suite;
  const bool all = s == "all";
  const double alpha = c.problem.alpha;
  std::vector<CheckOutcome> outcomes;

  auto slope = [&](Probe probe, double beta) {
    SlopeParams sp;
    sp.beta = beta;
    sp.band = t.band;
    sp.quad = c.quadrature;
    std::string label = std::string(to_string(probe));
    if (probe != Probe::Decay) {
      label += " beta=" + format_number(beta);
    }
    try {
      outcomes.push_back(from_fit(label, check_estimate_slope(probe, *p.op, p.order, sp),
                                  Json{{"probe", to_string(probe)}, {"beta", beta}, {"tau", sp.tau}}));
    } catch (const HypothesisError& e) {
      outcomes.push_back(hypothesis_failed(label, e));
    }
  };

  if (all || s == "smoothing") {
    for (Probe probe : {Probe::GSmoothing, Probe::KBound, Probe::GprimeBound, Probe::DJtauGBound, Probe::JbetaGGrowth}) {
      for (double beta : t.betas) {
        if (probe == Probe::JbetaGGrowth && beta == 0.0) {
          continue;
        }
        slope(probe, beta);
      }
    }
  }
  if (all || s == "decay") {
    slope(Probe::Decay, 0.0);
  }
  if (all || s == "laplace") {
    std::vector<Complex> lambdas(t.lambdas.begin(), t.lambdas.end());
    outcomes.push_back(from_report(check_laplace_identity(*p.op, p.order, p.a, lambdas, 60.0)));
  }
  if (all || s == "holder") {
    const CheckForcing cf = check_forcing(p, true);
    for (double sigma : t.sigmas) {
      CheckOutcome o = from_report(check_holder_regularity(*p.op, p.order, sigma, ForcingTerm::callback(cf.f),
                                                           c.problem.T, c.problem.grid.n, 2, c.quadrature));
      o.counted = sigma < 1.0 - alpha;
      o.json["sigma"] = sigma;
      o.json["counted"] = o.counted;
      o.json["forcing"] = cf.name;
      outcomes.push_back(std::move(o));
    }
  }
  if (all || s == "duhamel") {
    const CheckForcing cf = check_forcing(p, false);
    CheckOutcome o = from_report(check_duhamel_identity(*p.op, p.order, ForcingTerm::callback(cf.f),
                                                        ForcingTerm::callback(cf.fprime), c.problem.T,
                                                        c.problem.grid.n, 2, c.quadrature));
    o.json["forcing"] = cf.name;
    outcomes.push_back(std::move(o));
  }
  if (all || s == "kernel") {
    std::vector<TimeGrid> grids;
    for (Index n : {256, 1024, 4096}) {
      grids.push_back(TimeGrid::geometric(1e-12, c.problem.T, n));
    }
    const double target = p.op->dim() == 1 ? 1e-5 : 1e-4;
    outcomes.push_back(from_report(check_integrated_kernel_identity(*p.op, p.order, p.a, grids, target, c.quadrature)));
  }
  if (all || s == "residual") {
    outcomes.push_back(from_report(check_residual_convergence(*p.op, p.order, p.a, forcing_term(p), c.problem.T,
                                                              c.problem.grid.n, 0.25, c.quadrature)));
  }

  Json reports = Json::array();
  std::vector<double> idx;
  std::vector<double> xs;
  std::vector<double> ys;
  Plot plot{"estimate probes", "t", "norm", true, true, {}, {}};
  int failed = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    CheckOutcome& o = outcomes[i];
    for (const auto& sample : o.json.value("samples", Json::array())) {
      idx.push_back(static_cast<double>(i));
      xs.push_back(sample[0].get<double>());
      ys.push_back(sample[1].get<double>());
    }
    if (o.plotted) {
      plot.series.push_back(o.series);
    }
    reports.push_back(o.json);
    if (o.counted && o.verdict != Verdict::Pass) {
      ++failed;
    }
    std::string tag = to_string(o.verdict);
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char ch) { return std::toupper(ch); });
    out << tag << (o.counted ? "  " : "  (informational) ") << o.line << '\n';
  }
  Table samples;
  samples.add("check", idx);
  samples.add("x", xs);
  samples.add("y", ys);
  art.csv("verify_samples.csv", samples);
  art.json("verify.json", Json{{"suite", s},
                               {"operator", p.op->name()},
                               {"dim", p.op->dim()},
                               {"alpha", alpha},
                               {"passed", failed == 0},
                               {"reports", reports}});
  if (!plot.series.empty()) {
    art.svg("verify.svg", plot);
  }
  out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) did not pass") << '\n';
  return failed == 0 ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------- invert

int run_invert(const RunConfig& c, Artifacts& art, std::ostream& out) {
  const Problem p = make_problem(c);
  const TaskConfig& t = c.task;
  const Index dim = p.op->dim();
  ObservationSpec spec{t.omega.empty() ? ObservationSpec::middle_third(dim) : t.omega,
                       ObservationSpec::log_times(t.t_first, c.problem.T, t.n_times), t.noise};
  const ObservationMap map = observation_map(*p.op, p.order, spec, c.quadrature);
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), spec.obs_times.begin(), spec.obs_times.end());
  const GridFunction<Complex> u =
      solve_linear(*p.op, p.order, p.a, ForcingTerm::zero(), TimeGrid(nodes), c.quadrature).trajectory;
  const ObservationData data = observe(u, spec, c.seed);
  const RVector truth = p.a.real();

  std::optional<LCurve> lc;
  double reg = t.reg;
  if (t.noise > 0.0) {
    lc = l_curve(map, data, t.regs, truth);
    reg = lc->points[lc->corner].reg;
  }
  const Reconstruction rec = reconstruct_initial(map, data, reg);
  const double rel = (rec.a - truth).norm() / truth.norm();

  std::vector<double> k(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    k[static_cast<std::size_t>(i)] = static_cast<double>(i);
  }
  const std::vector<double> sv(map.singular_values.data(), map.singular_values.data() + dim);
  Table at;
  at.add("index", k);
  at.add("truth", std::vector<double>(truth.data(), truth.data() + dim));
  at.add("a_hat", std::vector<double>(rec.a.data(), rec.a.data() + dim));
  art.csv("a_hat.csv", at);
  Table st;
  st.add("k", k);
  st.add("sigma", sv);
  art.csv("sigma.csv", st);
  art.svg("sigma.svg", Plot{"observation map singular values", "k", "sigma_k", false, true,
                            {{"sigma_k", k, sv, true}}, {"sigma_min " + fixed(map.sigma_min(), 3)}});

  Json j{{"operator", p.op->name()},
         {"dim", dim},
         {"alpha", c.problem.alpha},
         {"omega", spec.omega},
         {"obs_times", spec.obs_times},
         {"noise_level", t.noise},
         {"noise_sigma", data.noise_sigma},
         {"seed", c.seed},
         {"sigma_min", map.sigma_min()},
         {"sigma_max", map.sigma_max()},
         {"ill_posed", map.ill_posed()},
         {"reg", reg},
         {"residual_norm", rec.residual_norm},
         {"solution_norm", rec.solution_norm},
         {"discrepancy", rec.discrepancy},
         {"relative_error", rel}};
  if (lc) {
    std::vector<double> regs, rn, sn, re;
    Json pts = Json::array();
    for (const LCurvePoint& q : lc->points) {
      regs.push_back(q.reg);
      rn.push_back(q.residual_norm);
      sn.push_back(q.solution_norm);
      re.push_back(q.relative_error.value_or(std::nan("")));
      pts.push_back(Json{{"reg", q.reg},
                         {"residual_norm", q.residual_norm},
                         {"solution_norm", q.solution_norm},
                         {"relative_error", q.relative_error ? Json(*q.relative_error) : Json()}});
    }
    const auto best = std::min_element(re.begin(), re.end());
    j["l_curve"] = Json{{"points", pts}, {"corner", lc->corner}, {"best_reg", regs[best - re.begin()]},
                        {"best_relative_error", *best}};
    Table lt;
    lt.add("reg", regs);
    lt.add("residual_norm", rn);
    lt.add("solution_norm", sn);
    lt.add("relative_error", re);
    art.csv("lcurve.csv", lt);
    art.svg("lcurve.svg", Plot{"L-curve", "residual norm", "solution norm", true, true, {{"L-curve", rn, sn, false}},
                               {"corner reg " + fixed(reg, 3)}});
  }
  art.json("invert.json", j);
  out << "sigma_min " << fixed(map.sigma_min(), 3) << ", sigma_max " << fixed(map.sigma_max(), 3) << ", reg "
      << fixed(reg, 3) << ", relative error " << fixed(rel, 3) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- bench

int run_bench(const RunConfig& c, Artifacts& art, std::ostream& out) {
  std::vector<double> ns, best, median;
  for (Index n : c.task.sizes) {
    RunConfig cn = c;
    cn.problem.op.n = n;
    if (cn.problem.op.type != "laplacian1d" && cn.problem.op.type != "elliptic1d") {
      cn.problem.op.type = "laplacian1d";
    }
    const Problem p = make_problem(cn);
    std::vector<double> times;
    for (int r = 0; r < c.task.repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      solve_linear(*p.op, p.order, p.a, forcing_term(p), p.grid, c.quadrature);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    std::sort(times.begin(), times.end());
    ns.push_back(static_cast<double>(n));
    best.push_back(times.front());
    median.push_back(times[times.size() / 2]);
    out << "n=" << n << "  min " << fixed(times.front(), 3) << " s  median " << fixed(median.back(), 3) << " s\n";
  }
  Table bt;
  bt.add("n", ns);
  bt.add("min_seconds", best);
  bt.add("median_seconds", median);
  art.csv("bench.csv", bt);
  art.json("bench.json", Json{{"grid_nodes", c.problem.grid.n}, {"threads", worker_count()}, {"n", ns},
                              {"min_seconds", best}, {"median_seconds", median}});
  art.svg("bench.svg", Plot{"solve_linear wall time", "n", "seconds", true, true,
                            {{"min", ns, best, false}, {"median", ns, median, false}}, {}});
  return kSuccess;
}

std::string versions_compiler() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Artifacts art(config.output, config.task.name != "ml" || config.output.dir.has_value());
  const std::string& name = config.task.name;
  int code = kError;
  if (name == "ml") {
    code = run_ml(config, art, out);
  } else if (name == "solve") {
    code = run_solve(config, art, out);
  } else if (name == "semilinear") {
    code = run_semilinear(config, art, out);
  } else if (name == "verify") {
    code = run_verify(config, art, out);
  } else if (name == "invert") {
    code = run_invert(config, art, out);
  } else if (name == "bench") {
    code = run_bench(config, art, out);
  } else {
    throw ConfigError("task.name", "unknown task \"" + name + "\"");
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  art.manifest(Json{{"tool", "fracop"},
                    {"version", kVersion},
                    {"task", name},
                    {"config_hash", "fnv1a64:" + config_hash(config)},
                    {"seed", config.seed},
                    {"versions",
                     {{"fracop", kVersion},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                      {"cli11", CLI11_VERSION},
                      {"compiler", versions_compiler()}}},
                    {"threads", worker_count()},
                    {"exit_code", code},
                    {"outputs", art.files()},
                    {"config", to_json(config)},
                    {"wall_time_seconds", wall}});
  return code;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracop: time-fractional evolution equations d_t^alpha (u - a) = A u + F"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<long long> seed;
  std::vector<std::string> formats;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--formats", formats, "output formats (csv, json, svg)")->delimiter(',');

  std::vector<std::pair<std::string, std::function<std::optional<Json>()>>> overrides;
  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& path, auto* store, const std::string& help) {
    sub->add_option(name, *store, help);
    overrides.emplace_back(path, [store]() -> std::optional<Json> {
      if (*store) {
        return Json(**store);
      }
      return std::nullopt;
    });
  };

  std::optional<std::string> op_type, grid_type, initial_type, forcing_type;
  std::optional<long long> n, steps;
  std::optional<double> alpha, T, mu;
  auto problem_flags = [&](CLI::App* sub) {
    sub->add_option("--op", op_type, "operator type");
    sub->add_option("--n", n, "operator dimension");
    sub->add_option("--mu", mu, "scalar operator value");
    sub->add_option("--alpha", alpha, "fractional order in (0, 1)");
    sub->add_option("--T", T, "final time");
    sub->add_option("--steps", steps, "grid intervals");
    sub->add_option("--grid", grid_type, "grid type");
    sub->add_option("--initial", initial_type, "initial value type");
    sub->add_option("--forcing", forcing_type, "forcing type");
  };
  for (auto& [path, store] : std::vector<std::pair<std::string, std::optional<std::string>*>>{
           {"problem.operator.type", &op_type},
           {"problem.grid.type", &grid_type},
           {"problem.initial.type", &initial_type},
           {"problem.forcing.type", &forcing_type}}) {
    overrides.emplace_back(path, [s = store]() -> std::optional<Json> { return *s ? std::optional<Json>(**s) : std::nullopt; });
  }
  for (auto& [path, store] : std::vector<std::pair<std::string, std::optional<long long>*>>{
           {"problem.operator.n", &n}, {"problem.grid.n", &steps}}) {
    overrides.emplace_back(path, [s = store]() -> std::optional<Json> { return *s ? std::optional<Json>(**s) : std::nullopt; });
  }
  for (auto& [path, store] : std::vector<std::pair<std::string, std::optional<double>*>>{
           {"problem.alpha", &alpha}, {"problem.T", &T}, {"problem.operator.mu", &mu}}) {
    overrides.emplace_back(path, [s = store]() -> std::optional<Json> { return *s ? std::optional<Json>(**s) : std::nullopt; });
  }

  CLI::App* ml = app.add_subcommand("ml", "evaluate the Mittag-Leffler function E_{a1,a2}(z)");
  std::optional<double> a1, a2, z, zi, tol;
  flag(ml, "--a1", "task.a1", &a1, "first parameter");
  flag(ml, "--a2", "task.a2", &a2, "second parameter");
  ml->add_option("--z", z, "argument (real part)");
  ml->add_option("--zi", zi, "argument (imaginary part)");
  flag(ml, "--tol", "task.tol", &tol, "relative tolerance");

  CLI::App* solve = app.add_subcommand("solve", "solve the linear problem and fit the decay of ||u(t)||");
  problem_flags(solve);
  std::optional<double> fit_from;
  flag(solve, "--fit-from", "task.fit_from", &fit_from, "decay fit window start as a fraction of T");

  CLI::App* semi = app.add_subcommand("semilinear", "Picard iteration for u = G a + K * F(u)");
  problem_flags(semi);
  std::optional<std::string> nonlinearity, guess;
  std::optional<double> coupling, picard_tol, radius;
  std::optional<long long> max_iter;
  flag(semi, "--nonlinearity", "task.nonlinearity", &nonlinearity, "sin, cube or linear");
  flag(semi, "--coupling", "task.coupling", &coupling, "nonlinearity coefficient");
  flag(semi, "--tol", "task.tol", &picard_tol, "increment tolerance");
  flag(semi, "--radius", "task.radius", &radius, "ball radius");
  flag(semi, "--max-iter", "task.max_iter", &max_iter, "iteration cap");
  flag(semi, "--guess", "task.guess", &guess, "default or zero");

  CLI::App* verify = app.add_subcommand("verify", "run estimate and identity checks");
  problem_flags(verify);
  std::optional<std::string> suite;
  std::optional<double> band;
  flag(verify, "--suite", "task.suite", &suite, "smoothing, decay, laplace, holder, duhamel, kernel, residual or all");
  flag(verify, "--band", "task.band", &band, "slope tolerance");

  CLI::App* invert = app.add_subcommand("invert", "reconstruct the initial value from interior observations");
  problem_flags(invert);
  std::optional<double> noise, reg, t_first;
  std::optional<long long> n_times;
  flag(invert, "--noise", "task.noise", &noise, "relative noise level");
  flag(invert, "--reg", "task.reg", &reg, "Tikhonov parameter (noiseless data)");
  flag(invert, "--n-times", "task.n_times", &n_times, "number of observation times");
  flag(invert, "--t-first", "task.t_first", &t_first, "first observation time");

  CLI::App* bench = app.add_subcommand("bench", "time solve_linear over operator sizes");
  problem_flags(bench);
  std::vector<long long> sizes;
  std::optional<long long> repeats;
  bench->add_option("--sizes", sizes, "operator sizes")->delimiter(',');
  flag(bench, "--repeats", "task.repeats", &repeats, "repetitions per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kError;
  }

  try {
    Json j = Json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      try {
        j = Json::parse(is);
      } catch (const Json::parse_error& e) {
        throw ConfigError(config_path, std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) {
        throw ConfigError("<root>", "expected an object");
      }
    }
    const std::string task = app.get_subcommands().front()->get_name();
    if (j.contains("task") && j["task"].is_object() && j["task"].contains("name") && j["task"]["name"] != task) {
      throw ConfigError("task.name", "config names task " + j["task"]["name"].dump() + " but the subcommand is \"" +
                                         task + "\"");
    }
    set_path(j, "task.name", task);
    for (const auto& [path, value] : overrides) {
      if (auto v = value()) {
        set_path(j, path, *v);
      }
    }
    if (z || zi) {
      set_path(j, "task.z", Json::array({z.value_or(0.0), zi.value_or(0.0)}));
    }
    if (!sizes.empty()) {
      set_path(j, "task.sizes", sizes);
    }
    if (out_dir) {
      set_path(j, "output.dir", *out_dir);
    }
    if (!formats.empty()) {
      set_path(j, "output.formats", formats);
    }
    if (seed) {
      set_path(j, "seed", *seed);
    }
    return run(parse_config(j), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kError;
}

}  // namespace fracop::cli
