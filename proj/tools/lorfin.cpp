// Experiment driver: runs the library's reproducible experiments and emits
// one JSON object per line (or CSV tables via the `plot` subcommand).

#include "CLI11.hpp"
#include "lorfin/experiments.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lorfin;

namespace {

void add_common(CLI::App* cmd, ExperimentOptions& opt) {
  cmd->set_help_flag("--help", "print help");  // frees -h / --h
  cmd->add_option("--seed", opt.seed, "PRNG seed (single 64-bit word)");
  cmd->add_option("--n", opt.n, "half-dimension n");
  cmd->add_option("--theta", opt.thetas, "rotation rates (repeatable)");
  cmd->add_option("--T", opt.T, "time horizon");
  cmd->add_option("--steps", opt.steps, "integrator steps per unit time");
  cmd->add_option("--N", opt.N, "index-form discretization nodes");
  cmd->add_option("--samples", opt.samples, "sample count");
  cmd->add_option("--k", opt.k, "trigonometric degree");
  cmd->add_option("--s", opt.s, "quantum pinching parameter in (0,1)");
  cmd->add_option("--eps", opt.eps, "epsilon parameter");
  cmd->add_option("--L", opt.L, "requested length");
  cmd->add_option("--J", opt.J, "time-function truncation");
  cmd->add_option("--tol", opt.tol, "tolerance");
  cmd->add_option("--h", opt.h, "circle Hamiltonian spec (2+cos, const:c, fourier:seed)");
  cmd->add_option("--a", opt.a, "hyperbolic target diag(a, 1/a)");
  cmd->add_option("--lifts", opt.lifts, "full turns of the target lift");
  cmd->add_option("--coeff", opt.coeff, "quartic perturbation coefficient");
  cmd->add_option("--M", opt.M, "x-mode count (second variation)");
  cmd->add_option("--Lmodes", opt.Lmodes, "t-mode count (second variation)");
  cmd->add_option("--grid", opt.grid_h, "grid spacing for the disk domain");
  cmd->add_flag("--extremal", opt.extremal, "use the extremal instance");
}

int write_records(const std::vector<ExperimentResult>& records,
                  const std::string& out, bool json_flag) {
  (void)json_flag;  // output is always JSON lines
  std::ostringstream os;
  bool all_ok = true;
  for (const auto& r : records) {
    os << r.to_jsonl() << "\n";
    if (!r.ok()) all_ok = false;
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open output file: " << out << "\n";
      return 2;
    }
    f << os.str();
  }
  return all_ok ? 0 : 1;
}

std::pair<std::string, std::vector<double>> parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw DomainError("sweep axis must look like name=v1,v2 or name=a:b");
  const std::string key = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  std::vector<double> vals;
  const auto colon = rest.find(':');
  if (colon != std::string::npos) {
    const int a = std::stoi(rest.substr(0, colon));
    const int b = std::stoi(rest.substr(colon + 1));
    for (int v = a; v <= b; ++v) vals.push_back(v);
  } else {
    std::istringstream is(rest);
    std::string tok;
    while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
  }
  if (vals.empty()) throw DomainError("sweep axis has no values");
  return {key, vals};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorentz-Finsler experiments on Sp(2n), circle diffeomorphisms "
               "and convex symplectomorphisms"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  std::string out;
  bool json_flag = true;
  app.add_option("--out", out, "write records to this file instead of stdout");
  app.add_flag("--json", json_flag, "emit JSON lines (default)");

  ExperimentOptions opt;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : experiment_names()) {
    CLI::App* c = app.add_subcommand(name, "run the '" + name + "' experiment");
    add_common(c, opt);
    subs[name] = c;
  }

  std::string sweep_target;
  std::vector<std::string> axis_specs;
  CLI::App* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  sweep->add_option("experiment", sweep_target, "experiment to sweep")
      ->required();
  sweep->add_option("--axis", axis_specs,
                    "axis spec name=v1,v2,... or name=a:b (repeatable)")
      ->required();
  add_common(sweep, opt);

  std::string plot_file, plot_kind = "longpath";
  CLI::App* plot = app.add_subcommand("plot", "emit CSV from a result file");
  plot->add_option("file", plot_file, "JSONL result file")->required();
  plot->add_option("--kind", plot_kind, "longpath | coindex | varthm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      std::ifstream f(plot_file, std::ios::binary);
      if (!f) {
        std::cerr << "cannot open result file: " << plot_file << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << f.rdbuf();
      const std::string csv = emit_plot_data(buf.str(), plot_kind);
      if (out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream o(out, std::ios::binary);
        o << csv;
      }
      return 0;
    }
    if (sweep->parsed()) {
      std::vector<std::pair<std::string, std::vector<double>>> axes;
      for (const auto& s : axis_specs) axes.push_back(parse_axis(s));
      return write_records(sweep_experiment(sweep_target, opt, axes), out,
                           json_flag);
    }
    for (const auto& [name, cmd] : subs) {
      if (cmd->parsed())
        return write_records(run_experiment(name, opt), out, json_flag);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
