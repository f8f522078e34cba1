#pragma once

#include "fracop/evolution_solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracop::cli {

using Json = nlohmann::ordered_json;

/// Schema violation, reported with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

// Configuration schema (JSON, strict: unknown keys are rejected).
//
// {
//   "problem": {
//     "operator": {"type": "laplacian1d" | "elliptic1d" | "diagonal" | "scalar",
//                  "n": 32, "mu": -1, "values": [...], "amplitude": 0.5,
//                  "reaction": 0, "gamma": 2.356, "shift": 0},
//     "alpha": 0.5, "T": 1,
//     "grid": {"type": "uniform" | "graded" | "geometric", "n": 200, "r": 2, "t_first": 1e-8},
//     "initial": {"type": "harmonic" | "ones" | "mode" | "smooth" | "random" | "values",
//                 "mode": 1, "scale": 1, "values": [...]},
//     "forcing": {"type": "zero" | "constant" | "sin" | "power", "amplitude": 1,
//                 "exponent": 0.9, "profile": "ones" | "harmonic" | "random"}
//   },
//   "task": {"name": "ml" | "solve" | "semilinear" | "verify" | "invert" | "bench", ...},
//   "output": {"dir": "fracop-out", "formats": ["csv", "json", "svg"]},
//   "quadrature": {"path": "paper" | "fixed", "n_ray": 48, "n_arc": 32, "tol": 1e-12},
//   "seed": 0
// }
//
// Task keys:
//   ml          a1, a2, z (number or [re, im]), tol
//   solve       fit_from (fraction of T where the decay fit starts)
//   semilinear  nonlinearity ("sin" | "cube" | "linear"), coupling, gamma_exp,
//               radius, lipschitz, tol, max_iter, guess ("default" | "zero")
//   verify      suite ("smoothing" | "decay" | "laplace" | "holder" | "duhamel" |
//               "kernel" | "residual" | "all"), betas, sigmas, lambdas, band
//   invert      omega ("middle-third" or index list), n_times, t_first, noise,
//               reg, regs
//   bench       sizes, repeats

struct OperatorConfig {
  std::string type = "laplacian1d";
  Index n = 32;
  double mu = -1.0;
  std::vector<double> values;
  double amplitude = 0.5;
  double reaction = 0.0;
  double gamma = 0.75 * kPi;
  double shift = 0.0;
};

struct GridConfig {
  std::string type = "uniform";
  Index n = 200;
  double r = 2.0;
  double t_first = 1e-8;
};

struct InitialConfig {
  std::string type = "harmonic";
  Index mode = 1;
  double scale = 1.0;
  std::vector<double> values;
};

struct ForcingConfig {
  std::string type = "zero";
  double amplitude = 1.0;
  double exponent = 0.9;
  std::string profile = "ones";
};

struct ProblemConfig {
  OperatorConfig op;
  double alpha = 0.5;
  double T = 1.0;
  GridConfig grid;
  InitialConfig initial;
  ForcingConfig forcing;
};

struct TaskConfig {
  std::string name;
  // ml
  double a1 = 1.0;
  double a2 = 1.0;
  Complex z = 0.0;
  std::optional<double> tol;
  // solve
  double fit_from = 0.1;
  // semilinear
  std::string nonlinearity = "sin";
  double coupling = 1.0;
  double gamma_exp = 0.5;
  std::optional<double> radius;
  std::optional<double> lipschitz;
  double picard_tol = 1e-10;
  int max_iter = 100;
  std::string guess = "default";
  // verify
  std::string suite = "smoothing";
  std::vector<double> betas{0.0, 0.5, 1.0};
  std::vector<double> sigmas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0, 16.0};
  double band = 0.05;
  // invert
  std::vector<Index> omega;
  Index n_times = 32;
  double t_first = 1e-10;
  double noise = 0.0;
  double reg = 1e-12;
  std::vector<double> regs{1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  // bench
  std::vector<Index> sizes{16, 32, 64, 128};
  int repeats = 3;
};

struct OutputConfig {
  /// Unset: the ml task prints only, every other task writes to "fracop-out".
  std::optional<std::string> dir;
  std::vector<std::string> formats{"csv", "json", "svg"};
  bool wants(const std::string& f) const;
};

struct RunConfig {
  ProblemConfig problem;
  TaskConfig task;
  OutputConfig output;
  QuadratureConfig quadrature;
  std::uint64_t seed = 0;
};

/// Validates and converts; throws ConfigError naming the field path.
RunConfig parse_config(const Json& j);
/// Fully resolved configuration (defaults filled in) in canonical key order.
Json to_json(const RunConfig& c);
/// FNV-1a 64 of the canonical configuration, as 16 hex digits.
std::string config_hash(const RunConfig& c);

/// Sets the value at a dotted path ("problem.operator.n"), creating objects.
void set_path(Json& j, const std::string& path, Json value);

enum ExitCode { kSuccess = 0, kError = 1, kVerificationFailure = 2 };

/// Executes the task, writes its artifacts and manifest.json, and returns the
/// exit code. Solver and numerical errors propagate as exceptions.
int run(const RunConfig& config, std::ostream& out);

/// Command-line entry: parses flags (overriding config-file fields), runs and
/// maps every error to exit code 1 with a message on err.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fracop::cli
