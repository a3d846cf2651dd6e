#pragma once

#include "lorfin/circle.hpp"
#include "lorfin/convex.hpp"
#include "lorfin/paths.hpp"
#include "lorfin/symplectic.hpp"

#include <map>
#include <string>

namespace lorfin {

struct Check {
  std::string name;
  bool pass;
  double lhs;
  double rhs;
  double tol;
};

// One JSON-lines record: experiment id, parameters, numeric results, checks
// and optional plot-ready columns.
struct ExperimentResult {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;  // preformatted
  std::vector<std::pair<std::string, double>> results;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  void param(const std::string& k, const std::string& v);
  void param(const std::string& k, double v);
  void param(const std::string& k, int v);
  void result(const std::string& k, double v);
  void check(const std::string& name, bool pass, double lhs, double rhs,
             double tol);
  bool ok() const;
  // One JSON object, keys in insertion order, doubles with 17 significant
  // digits (lossless round trip).
  std::string to_jsonl() const;
};

std::string format_double(double v);

// Named positive Hamiltonian families for the CLI: "2+cos", "const:<c>",
// "fourier:<seed>[:<degree>[:<floor>]]".
std::function<double(double)> parse_circle_hamiltonian(const std::string& spec);

struct ExperimentOptions {
  uint64_t seed = 1;
  int n = 1;
  std::vector<double> thetas = {1.0};
  double T = kPi / 2.0;
  int steps = 512;
  int N = 64;          // discretization nodes (coindex)
  int samples = 100;
  int k = 1;
  double s = 0.5;
  double eps = 1e-2;
  double L = 10.0;     // requested length
  int J = 16;          // time-function truncation
  double tol = 1e-6;
  std::string h = "2+cos";
  double a = 3.0;      // hyperbolic target diag(a, 1/a)
  int lifts = 1;
  double coeff = 0.05; // quartic perturbation coefficient
  int M = 4;           // x-modes (second variation)
  int Lmodes = 4;      // t-modes (second variation)
  double grid_h = 1.0 / 64.0;
  bool extremal = false;
};

// Dispatch an experiment by name; throws DomainError on unknown names.
std::vector<ExperimentResult> run_experiment(const std::string& name,
                                             const ExperimentOptions& opt);

const std::vector<std::string>& experiment_names();

// Cartesian sweep: axes are (flag name, values); per-cell seeds are derived
// from the base seed in grid order, and a final aggregate record reports the
// pass rate.
std::vector<ExperimentResult> sweep_experiment(
    const std::string& name, const ExperimentOptions& base,
    const std::vector<std::pair<std::string, std::vector<double>>>& axes);

// CSV extraction from a JSONL result file; kinds: "longpath", "coindex",
// "varthm", or "columns" (all stored columns of the first matching record).
std::string emit_plot_data(const std::string& jsonl_content,
                           const std::string& kind);

}  // namespace lorfin
