#include "fracop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace fracop::cli {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string one_of(const std::vector<std::string>& options) {
  std::string s = "must be one of";
  for (std::size_t i = 0; i < options.size(); ++i) {
    s += (i ? ", \"" : " \"") + options[i] + "\"";
  }
  return s;
}

// Strict view of one JSON object: every read marks a key as known, and
// finish() rejects whatever is left.
class Reader {
public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  const Json* find(const std::string& key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double def) {
    const Json* v = find(key);
    if (!v) {
      return def;
    }
    if (!v->is_number()) {
      throw ConfigError(at(key), "expected a number");
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      throw ConfigError(at(key), "must be finite");
    }
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!j_.contains(key)) {
      find(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  long long integer(const std::string& key, long long def) {
    const Json* v = find(key);
    if (!v) {
      return def;
    }
    if (!v->is_number_integer()) {
      throw ConfigError(at(key), "expected an integer");
    }
    return v->get<long long>();
  }

  std::string string(const std::string& key, const std::string& def, const std::vector<std::string>& options = {}) {
    const Json* v = find(key);
    if (!v) {
      return def;
    }
    if (!v->is_string()) {
      throw ConfigError(at(key), "expected a string");
    }
    std::string s = v->get<std::string>();
    if (!options.empty() && std::find(options.begin(), options.end(), s) == options.end()) {
      throw ConfigError(at(key), one_of(options) + ", got \"" + s + "\"");
    }
    return s;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    const Json* v = find(key);
    if (!v) {
      return def;
    }
    if (!v->is_array()) {
      throw ConfigError(at(key), "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number() || !std::isfinite((*v)[i].get<double>())) {
        throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a finite number");
      }
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  std::vector<Index> indices(const std::string& key, std::vector<Index> def) {
    const Json* v = find(key);
    if (!v) {
      return def;
    }
    if (!v->is_array()) {
      throw ConfigError(at(key), "expected an array of integers");
    }
    std::vector<Index> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer()) {
        throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected an integer");
      }
      out.push_back((*v)[i].get<Index>());
    }
    return out;
  }

  Reader child(const std::string& key) {
    const Json* v = find(key);
    static const Json empty = Json::object();
    return Reader(v ? *v : empty, at(key));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!known_.count(it.key())) {
        throw ConfigError(at(it.key()), "unknown key");
      }
    }
  }

private:
  const Json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) {
    throw ConfigError(path, what);
  }
}

OperatorConfig parse_operator(Reader r) {
  OperatorConfig c;
  c.type = r.string("type", c.type, {"laplacian1d", "elliptic1d", "diagonal", "scalar"});
  c.n = r.integer("n", c.n);
  c.mu = r.number("mu", c.mu);
  c.values = r.numbers("values", c.values);
  c.amplitude = r.number("amplitude", c.amplitude);
  c.reaction = r.number("reaction", c.reaction);
  c.gamma = r.number("gamma", c.gamma);
  c.shift = r.number("shift", c.shift);
  r.finish();
  require(c.n >= 1, r.at("n"), "must be >= 1");
  require(c.gamma > kPi / 2 && c.gamma < kPi, r.at("gamma"), "must lie in (pi/2, pi)");
  if (c.type == "scalar") {
    require(c.mu < 0.0, r.at("mu"), "must be negative");
    c.n = 1;
  }
  if (c.type == "diagonal") {
    require(!c.values.empty(), r.at("values"), "required for a diagonal operator");
    for (double v : c.values) {
      require(v < 0.0, r.at("values"), "entries must be negative");
    }
    c.n = static_cast<Index>(c.values.size());
  }
  if (c.type == "elliptic1d") {
    require(std::abs(c.amplitude) < 1.0, r.at("amplitude"), "must satisfy |amplitude| < 1");
    require(c.reaction <= 0.0, r.at("reaction"), "must be <= 0");
  }
  return c;
}

GridConfig parse_grid(Reader r) {
  GridConfig c;
  c.type = r.string("type", c.type, {"uniform", "graded", "geometric"});
  c.n = r.integer("n", c.n);
  c.r = r.number("r", c.r);
  c.t_first = r.number("t_first", c.t_first);
  r.finish();
  require(c.n >= 2, r.at("n"), "must be >= 2");
  require(c.r >= 1.0, r.at("r"), "must be >= 1");
  require(c.t_first > 0.0, r.at("t_first"), "must be positive");
  return c;
}

InitialConfig parse_initial(Reader r) {
  InitialConfig c;
  c.type = r.string("type", c.type, {"harmonic", "ones", "mode", "smooth", "random", "values"});
  c.mode = r.integer("mode", c.mode);
  c.scale = r.number("scale", c.scale);
  c.values = r.numbers("values", c.values);
  r.finish();
  require(c.mode >= 1, r.at("mode"), "must be >= 1");
  require(c.type != "values" || !c.values.empty(), r.at("values"), "required for type \"values\"");
  return c;
}

ForcingConfig parse_forcing(Reader r) {
  ForcingConfig c;
  c.type = r.string("type", c.type, {"zero", "constant", "sin", "power"});
  c.amplitude = r.number("amplitude", c.amplitude);
  c.exponent = r.number("exponent", c.exponent);
  c.profile = r.string("profile", c.profile, {"ones", "harmonic", "random"});
  r.finish();
  require(c.exponent > 0.0, r.at("exponent"), "must be positive");
  return c;
}

ProblemConfig parse_problem(Reader r) {
  ProblemConfig c;
  c.op = parse_operator(r.child("operator"));
  c.alpha = r.number("alpha", c.alpha);
  c.T = r.number("T", c.T);
  c.grid = parse_grid(r.child("grid"));
  c.initial = parse_initial(r.child("initial"));
  c.forcing = parse_forcing(r.child("forcing"));
  r.finish();
  require(c.alpha > 0.0 && c.alpha < 1.0, r.at("alpha"), "must lie in (0, 1)");
  require(c.T > 0.0, r.at("T"), "must be positive");
  require(c.grid.type != "geometric" || c.grid.t_first < c.T, r.at("grid.t_first"), "must be below T");
  if (c.initial.type == "values") {
    require(static_cast<Index>(c.initial.values.size()) == c.op.n, r.at("initial.values"),
            "length must equal the operator dimension " + std::to_string(c.op.n));
  }
  require(c.initial.mode <= c.op.n, r.at("initial.mode"), "exceeds the operator dimension");
  return c;
}

const std::vector<std::string> kTasks{"ml", "solve", "semilinear", "verify", "invert", "bench"};

TaskConfig parse_task(Reader r) {
  TaskConfig c;
  require(r.has("name"), r.at("name"), "required");
  c.name = r.string("name", "", kTasks);
  if (c.name == "ml") {
    c.a1 = r.number("a1", c.a1);
    c.a2 = r.number("a2", c.a2);
    if (const Json* z = r.find("z")) {
      if (z->is_number()) {
        c.z = z->get<double>();
      } else if (z->is_array() && z->size() == 2 && (*z)[0].is_number() && (*z)[1].is_number()) {
        c.z = Complex((*z)[0].get<double>(), (*z)[1].get<double>());
      } else {
        throw ConfigError(r.at("z"), "expected a number or [re, im]");
      }
    }
    c.tol = r.optional_number("tol");
    require(c.a1 > 0.0, r.at("a1"), "must be positive");
    require(!c.tol || *c.tol > 0.0, r.at("tol"), "must be positive");
  } else if (c.name == "solve") {
    c.fit_from = r.number("fit_from", c.fit_from);
    require(c.fit_from > 0.0 && c.fit_from < 1.0, r.at("fit_from"), "must lie in (0, 1)");
  } else if (c.name == "semilinear") {
    c.nonlinearity = r.string("nonlinearity", c.nonlinearity, {"sin", "cube", "linear"});
    c.coupling = r.number("coupling", c.coupling);
    c.gamma_exp = r.number("gamma_exp", c.gamma_exp);
    c.radius = r.optional_number("radius");
    c.lipschitz = r.optional_number("lipschitz");
    c.picard_tol = r.number("tol", c.picard_tol);
    c.max_iter = static_cast<int>(r.integer("max_iter", c.max_iter));
    c.guess = r.string("guess", c.guess, {"default", "zero"});
    require(c.gamma_exp >= 0.0 && c.gamma_exp < 1.0, r.at("gamma_exp"), "must lie in [0, 1)");
    require(!c.radius || *c.radius > 0.0, r.at("radius"), "must be positive");
    require(!c.lipschitz || *c.lipschitz >= 0.0, r.at("lipschitz"), "must be >= 0");
    require(c.picard_tol > 0.0, r.at("tol"), "must be positive");
    require(c.max_iter >= 1, r.at("max_iter"), "must be >= 1");
  } else if (c.name == "verify") {
    c.suite = r.string("suite", c.suite,
                       {"smoothing", "decay", "laplace", "holder", "duhamel", "kernel", "residual", "all"});
    c.betas = r.numbers("betas", c.betas);
    c.sigmas = r.numbers("sigmas", c.sigmas);
    c.lambdas = r.numbers("lambdas", c.lambdas);
    c.band = r.number("band", c.band);
    for (double b : c.betas) {
      require(b >= 0.0 && b <= 1.0, r.at("betas"), "entries must lie in [0, 1]");
    }
    for (double s : c.sigmas) {
      require(s > 0.0 && s < 1.0, r.at("sigmas"), "entries must lie in (0, 1)");
    }
    for (double l : c.lambdas) {
      require(l > 0.0, r.at("lambdas"), "entries must be positive");
    }
    require(c.band > 0.0, r.at("band"), "must be positive");
  } else if (c.name == "invert") {
    if (const Json* w = r.find("omega")) {
      if (w->is_string()) {
        require(w->get<std::string>() == "middle-third", r.at("omega"), "expected \"middle-third\" or a list");
      } else {
        c.omega = r.indices("omega", {});
      }
    }
    c.n_times = r.integer("n_times", c.n_times);
    c.t_first = r.number("t_first", c.t_first);
    c.noise = r.number("noise", c.noise);
    c.reg = r.number("reg", c.reg);
    c.regs = r.numbers("regs", c.regs);
    require(c.n_times >= 2, r.at("n_times"), "must be >= 2");
    require(c.t_first > 0.0, r.at("t_first"), "must be positive");
    require(c.noise >= 0.0, r.at("noise"), "must be >= 0");
    require(c.reg >= 0.0, r.at("reg"), "must be >= 0");
    require(c.regs.size() >= 3, r.at("regs"), "needs at least 3 values");
    for (double g : c.regs) {
      require(g > 0.0, r.at("regs"), "entries must be positive");
    }
  } else if (c.name == "bench") {
    c.sizes = r.indices("sizes", c.sizes);
    c.repeats = static_cast<int>(r.integer("repeats", c.repeats));
    require(!c.sizes.empty(), r.at("sizes"), "must not be empty");
    for (Index s : c.sizes) {
      require(s >= 1, r.at("sizes"), "entries must be >= 1");
    }
    require(c.repeats >= 1, r.at("repeats"), "must be >= 1");
  }
  r.finish();
  return c;
}

OutputConfig parse_output(Reader r) {
  OutputConfig c;
  if (r.has("dir")) {
    c.dir = r.string("dir", "");
    require(!c.dir->empty(), r.at("dir"), "must not be empty");
  } else {
    r.find("dir");
  }
  if (const Json* f = r.find("formats")) {
    require(f->is_array(), r.at("formats"), "expected an array of strings");
    c.formats.clear();
    for (std::size_t i = 0; i < f->size(); ++i) {
      const std::string p = r.at("formats") + "[" + std::to_string(i) + "]";
      require((*f)[i].is_string(), p, "expected a string");
      const std::string s = (*f)[i].get<std::string>();
      require(s == "csv" || s == "json" || s == "svg", p, one_of({"csv", "json", "svg"}));
      c.formats.push_back(s);
    }
  }
  r.finish();
  return c;
}

QuadratureConfig parse_quadrature(Reader r) {
  QuadratureConfig c;
  c.path = r.string("path", "paper", {"paper", "fixed"}) == "paper" ? PathKind::Paper : PathKind::Fixed;
  c.nodes.n_ray = static_cast<int>(r.integer("n_ray", c.nodes.n_ray));
  c.nodes.n_arc = static_cast<int>(r.integer("n_arc", c.nodes.n_arc));
  c.tol = r.number("tol", c.tol);
  r.finish();
  require(c.nodes.n_ray >= 4, r.at("n_ray"), "must be >= 4");
  require(c.nodes.n_arc >= 4, r.at("n_arc"), "must be >= 4");
  require(c.tol > 0.0 && c.tol < 1.0, r.at("tol"), "must lie in (0, 1)");
  return c;
}

}  // namespace

bool OutputConfig::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

RunConfig parse_config(const Json& j) {
  Reader r(j, "");
  RunConfig c;
  c.problem = parse_problem(r.child("problem"));
  require(r.has("task"), "task", "required");
  c.task = parse_task(r.child("task"));
  c.output = parse_output(r.child("output"));
  c.quadrature = parse_quadrature(r.child("quadrature"));
  const long long seed = r.integer("seed", 0);
  require(seed >= 0, "seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  r.finish();
  if (c.task.name == "invert") {
    for (Index w : c.task.omega) {
      require(w >= 0 && w < c.problem.op.n, "task.omega", "indices must lie in [0, " +
                                                              std::to_string(c.problem.op.n) + ")");
    }
    require(c.task.t_first < c.problem.T, "task.t_first", "must be below problem.T");
  }
  return c;
}

Json to_json(const RunConfig& c) {
  const ProblemConfig& p = c.problem;
  Json op{{"type", p.op.type}, {"n", p.op.n}};
  if (p.op.type == "scalar") {
    op["mu"] = p.op.mu;
  }
  if (p.op.type == "diagonal") {
    op["values"] = p.op.values;
  }
  if (p.op.type == "elliptic1d") {
    op["amplitude"] = p.op.amplitude;
    op["reaction"] = p.op.reaction;
  }
  op["gamma"] = p.op.gamma;
  op["shift"] = p.op.shift;
  Json initial{{"type", p.initial.type}, {"mode", p.initial.mode}, {"scale", p.initial.scale}};
  if (p.initial.type == "values") {
    initial["values"] = p.initial.values;
  }
  Json problem{{"operator", op},
               {"alpha", p.alpha},
               {"T", p.T},
               {"grid", {{"type", p.grid.type}, {"n", p.grid.n}, {"r", p.grid.r}, {"t_first", p.grid.t_first}}},
               {"initial", initial},
               {"forcing",
                {{"type", p.forcing.type},
                 {"amplitude", p.forcing.amplitude},
                 {"exponent", p.forcing.exponent},
                 {"profile", p.forcing.profile}}}};
  const TaskConfig& t = c.task;
  Json task{{"name", t.name}};
  if (t.name == "ml") {
    task["a1"] = t.a1;
    task["a2"] = t.a2;
    task["z"] = Json::array({t.z.real(), t.z.imag()});
    if (t.tol) {
      task["tol"] = *t.tol;
    }
  } else if (t.name == "solve") {
    task["fit_from"] = t.fit_from;
  } else if (t.name == "semilinear") {
    task["nonlinearity"] = t.nonlinearity;
    task["coupling"] = t.coupling;
    task["gamma_exp"] = t.gamma_exp;
    if (t.radius) {
      task["radius"] = *t.radius;
    }
    if (t.lipschitz) {
      task["lipschitz"] = *t.lipschitz;
    }
    task["tol"] = t.picard_tol;
    task["max_iter"] = t.max_iter;
    task["guess"] = t.guess;
  } else if (t.name == "verify") {
    task["suite"] = t.suite;
    task["betas"] = t.betas;
    task["sigmas"] = t.sigmas;
    task["lambdas"] = t.lambdas;
    task["band"] = t.band;
  } else if (t.name == "invert") {
    task["omega"] = t.omega.empty() ? Json("middle-third") : Json(t.omega);
    task["n_times"] = t.n_times;
    task["t_first"] = t.t_first;
    task["noise"] = t.noise;
    task["reg"] = t.reg;
    task["regs"] = t.regs;
  } else if (t.name == "bench") {
    task["sizes"] = t.sizes;
    task["repeats"] = t.repeats;
  }
  Json output{{"formats", c.output.formats}};
  if (c.output.dir) {
    output["dir"] = *c.output.dir;
  }
  Json quad{{"path", c.quadrature.path == PathKind::Paper ? "paper" : "fixed"},
            {"n_ray", c.quadrature.nodes.n_ray},
            {"n_arc", c.quadrature.nodes.n_arc},
            {"tol", c.quadrature.tol}};
  return Json{{"problem", problem}, {"task", task}, {"output", output}, {"quadrature", quad}, {"seed", c.seed}};
}

std::string config_hash(const RunConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void set_path(Json& j, const std::string& path, Json value) {
  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object()) {
      throw ConfigError(path.substr(0, start ? start - 1 : 0), "expected an object");
    }
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    if (!node->contains(key)) {
      (*node)[key] = Json::object();
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace fracop::cli
