#include "lorfin/experiments.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace lorfin {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ExperimentResult::param(const std::string& k, const std::string& v) {
  params.emplace_back(k, "\"" + v + "\"");
}
void ExperimentResult::param(const std::string& k, double v) {
  params.emplace_back(k, format_double(v));
}
void ExperimentResult::param(const std::string& k, int v) {
  params.emplace_back(k, std::to_string(v));
}
void ExperimentResult::result(const std::string& k, double v) {
  results.emplace_back(k, v);
}
void ExperimentResult::check(const std::string& name, bool pass, double lhs,
                             double rhs, double tol) {
  checks.push_back({name, pass, lhs, rhs, tol});
}
bool ExperimentResult::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ExperimentResult::to_jsonl() const {
  std::ostringstream os;
  os << "{\"experiment\":\"" << experiment << "\",\"params\":{";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) os << ",";
    os << "\"" << params[i].first << "\":" << params[i].second;
  }
  os << "},\"results\":{";
  for (size_t i = 0; i < results.size(); ++i) {
    if (i) os << ",";
    os << "\"" << results[i].first << "\":" << format_double(results[i].second);
  }
  os << "},\"checks\":[";
  for (size_t i = 0; i < checks.size(); ++i) {
    if (i) os << ",";
    const Check& c = checks[i];
    os << "{\"name\":\"" << c.name << "\",\"pass\":" << (c.pass ? "true" : "false")
       << ",\"lhs\":" << format_double(c.lhs) << ",\"rhs\":" << format_double(c.rhs)
       << ",\"tol\":" << format_double(c.tol) << "}";
  }
  os << "]";
  if (!columns.empty()) {
    os << ",\"columns\":{";
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) os << ",";
      os << "\"" << columns[i].first << "\":[";
      for (size_t j = 0; j < columns[i].second.size(); ++j) {
        if (j) os << ",";
        os << format_double(columns[i].second[j]);
      }
      os << "]";
    }
    os << "}";
  }
  os << "}";
  return os.str();
}

std::function<double(double)> parse_circle_hamiltonian(
    const std::string& spec) {
  if (spec == "2+cos")
    return [](double x) { return 2.0 + std::cos(2.0 * kPi * x); };
  if (spec.rfind("const:", 0) == 0) {
    const double c = std::stod(spec.substr(6));
    if (c <= 0.0) throw DomainError("parse_circle_hamiltonian: need c > 0");
    return [c](double) { return c; };
  }
  if (spec.rfind("fourier:", 0) == 0) {
    std::string rest = spec.substr(8);
    uint64_t seed = 1;
    int degree = 3;
    double floor = 0.3;
    std::istringstream is(rest);
    std::string tok;
    int field = 0;
    while (std::getline(is, tok, ':')) {
      if (field == 0) seed = std::stoull(tok);
      if (field == 1) degree = std::stoi(tok);
      if (field == 2) floor = std::stod(tok);
      ++field;
    }
    Rng rng(seed);
    TrigPolynomial p = random_positive_trig(degree, rng, floor);
    return [p](double x) { return p.eval(x); };
  }
  throw DomainError("parse_circle_hamiltonian: unknown spec '" + spec + "'");
}

namespace {

ConeGenerator block_generator(const std::vector<double>& thetas) {
  const int two_n = 2 * static_cast<int>(thetas.size());
  Mat D = Mat::Zero(two_n, two_n);
  for (size_t j = 0; j < thetas.size(); ++j)
    D.block(2 * j, 2 * j, 2, 2) = thetas[j] * standard_J(2);
  return ConeGenerator::from_matrix(D);
}

// Seeded generator conjugated into general position with prescribed rates.
// Draw order: one random symplectic conjugator (two symmetric matrices,
// row-major normal entries each).
ConeGenerator conjugated_generator(const std::vector<double>& thetas,
                                   Rng& rng) {
  ConeGenerator D = block_generator(thetas);
  const Mat A = random_symplectic(2 * static_cast<int>(thetas.size()), rng);
  return ConeGenerator::from_matrix(A * D.X * A.inverse(), 1e-7);
}

ExperimentResult exp_coindex(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "coindex";
  r.param("n", static_cast<int>(opt.thetas.size()));
  for (size_t j = 0; j < opt.thetas.size(); ++j)
    r.param("theta" + std::to_string(j + 1), opt.thetas[j]);
  r.param("T", opt.T);
  auto X = block_generator(opt.thetas);
  const auto cf = conjugate_instants_closed_form(X, opt.T);
  r.result("closed_form", cf.coindex);
  std::vector<double> Ns, vals;
  for (int N : {16, 32, 64, 128}) {
    const auto d = coindex_discretized(X, opt.T, N);
    Ns.push_back(N);
    vals.push_back(d.coindex);
    if (N >= opt.N)
      r.check("coindex_N" + std::to_string(N), d.coindex == cf.coindex,
              d.coindex, cf.coindex, 0.0);
  }
  r.columns.emplace_back("N", Ns);
  r.columns.emplace_back("coindex", vals);
  return r;
}

ExperimentResult exp_conjugate(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "conjugate";
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  int mismatches = 0, instants = 0;
  for (int s = 0; s < opt.samples; ++s) {
    // Draw order per sample: theta1, separation, then the conjugator.
    const double th1 = rng.uniform(0.4, 1.4);
    const double th2 = th1 + rng.uniform(0.2, 1.0);
    auto X = conjugated_generator({th1, th2}, rng);
    const auto cf = conjugate_instants_closed_form(X, 3.0 * kPi);
    for (const auto& ci : cf.instants) {
      ++instants;
      if (conjugate_multiplicity_numeric(X, ci.t) != ci.multiplicity)
        ++mismatches;
    }
  }
  r.result("instants_checked", instants);
  r.result("mismatches", mismatches);
  r.check("zero_mismatches", mismatches == 0, mismatches, 0.0, 0.0);
  return r;
}

ExperimentResult exp_length(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "length";
  auto X = block_generator(opt.thetas);
  r.param("T", opt.T);
  auto geo = geodesic(X, Mat::Identity(X.X.rows(), X.X.cols()), opt.T, 256);
  const double len = length_G(geo);
  const double expect = opt.T * metric_G(X);
  r.result("length", len);
  r.result("T_times_G", expect);
  r.check("geodesic_length", std::abs(len - expect) <= 1e-10 * (1.0 + expect),
          len, expect, 1e-10);
  return r;
}

ExperimentResult exp_maslov(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "maslov";
  r.param("n", opt.n);
  const int two_n = 2 * opt.n;
  const int N = 128;
  std::vector<Mat> W(N + 1);
  std::vector<double> t(N + 1);
  for (int k = 0; k <= N; ++k) {
    t[k] = static_cast<double>(k) / N;
    W[k] = expm(2.0 * kPi * t[k] * standard_J(two_n));
  }
  const double mu = maslov_lift_nodes(W, t).mu.back();
  r.result("mu_loop", mu);
  r.check("loop_mu_equals_n", std::abs(mu - opt.n) <= 1e-9, mu, opt.n, 1e-9);
  return r;
}

ExperimentResult exp_distbound(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "distbound";
  r.param("n", opt.n);
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  int passed = 0;
  double worst = -1e300;
  for (int s = 0; s < opt.samples; ++s) {
    auto p = random_elliptic_conditioned_path(2 * opt.n, rng);
    auto bc = elliptic_length_bound_check(p, opt.tol);
    if (bc.pass) ++passed;
    worst = std::max(worst, bc.length - bc.bound);
  }
  r.result("pass_rate", static_cast<double>(passed) / opt.samples);
  r.result("worst_excess", worst);
  r.check("all_bounded", passed == opt.samples, passed, opt.samples, 0.0);
  // equality witness: equal-angle geodesic
  Rng rng2(opt.seed ^ 0x9e3779b9ULL);
  const double th = rng2.uniform(0.3, kPi - 0.3);
  std::vector<double> eq(opt.n, 1.0);
  auto Xeq = conjugated_generator(eq, rng2);
  auto geo = geodesic(Xeq, Mat::Identity(2 * opt.n, 2 * opt.n), th, 128);
  auto bc = elliptic_length_bound_check(geo, opt.tol);
  r.result("geodesic_gap", bc.bound - bc.length);
  r.check("equality_on_equal_angles", std::abs(bc.bound - bc.length) <= 1e-6,
          bc.length, bc.bound, 1e-6);
  return r;
}

ExperimentResult exp_longpath(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "longpath";
  r.param("a", opt.a);
  r.param("lifts", opt.lifts);
  r.param("L", opt.L);
  const AdS3Point target = ads3_hyperbolic_target(opt.a, opt.lifts);
  auto p = long_path_construct(target, opt.L, opt.steps);
  const double len = length_G(p);
  double min_eig = 1e300;
  std::vector<double> phis, thetas_c, min_eigs;
  for (int k = 0; k < p.nodes(); ++k) {
    Eigen::SelfAdjointEigenSolver<Mat> es(p.S[k]);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    min_eigs.push_back(es.eigenvalues().minCoeff());
    const AdS3Point q = ads3_chart_inverse(p.W[k]);
    phis.push_back(q.phi);
    thetas_c.push_back(q.theta);
  }
  const double endpoint_err = (p.W.back() - ads3_chart(target)).norm();
  r.result("length", len);
  r.result("min_eig_S", min_eig);
  r.result("endpoint_err", endpoint_err);
  r.check("length_at_least_L", len >= opt.L, len, opt.L, 0.0);
  r.check("all_nodes_timelike", min_eig > 0.0, min_eig, 0.0, 0.0);
  r.check("endpoint_error", endpoint_err <= 1e-6, endpoint_err, 1e-6, 0.0);
  r.columns.emplace_back("t", p.t);
  r.columns.emplace_back("phi", phis);
  r.columns.emplace_back("theta", thetas_c);
  r.columns.emplace_back("tau", p.t);
  r.columns.emplace_back("min_eig_s", min_eigs);
  return r;
}

ExperimentResult exp_ads3(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "ads3";
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  double max_rt = 0.0, max_metric = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    AdS3Point p{rng.uniform(0.05, 1.4), rng.uniform(0.0, 2.0 * kPi),
                rng.uniform(0.0, 2.0 * kPi)};
    const Mat W = ads3_chart(p);
    const AdS3Point q = ads3_chart_inverse(W);
    max_rt = std::max(max_rt, (ads3_chart(q) - W).norm());
    const double v[3] = {rng.normal(), rng.normal(), rng.normal()};
    const double h = 1e-5;
    AdS3Point pp{p.phi + h * v[0], p.theta + h * v[1], p.tau + h * v[2]};
    AdS3Point pm{p.phi - h * v[0], p.theta - h * v[1], p.tau - h * v[2]};
    const Mat dW = (ads3_chart(pp) - ads3_chart(pm)) / (2.0 * h);
    const double lhs = -dW.determinant();
    const double sp = std::sin(p.phi), cp = std::cos(p.phi);
    const double rhs =
        (v[0] * v[0] + sp * sp * v[1] * v[1] - v[2] * v[2]) / (cp * cp);
    max_metric = std::max(max_metric,
                          std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  r.result("max_round_trip", max_rt);
  r.result("max_metric_residual", max_metric);
  r.check("round_trip", max_rt <= 1e-10, max_rt, 1e-10, 0.0);
  r.check("metric_pullback", max_metric <= 1e-6, max_metric, 1e-6, 0.0);
  return r;
}

ExperimentResult exp_timefn(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "timefn";
  r.param("samples", opt.samples);
  r.param("eps", opt.eps);
  r.param("J", opt.J);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  int strict = 0;
  double max_dev = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    auto sched = random_timelike_schedule(2, 2.5, rng, 1.0);
    auto p = integrate_path(sched, 160);
    auto f = time_function_profile(p, opt.eps, opt.J, 0x5eedULL);
    auto mu = maslov_lift(p);
    bool mono = true;
    for (size_t k = 1; k < f.size(); ++k)
      if (f[k] <= f[k - 1]) mono = false;
    if (mono) ++strict;
    for (size_t k = 0; k < f.size(); ++k)
      max_dev = std::max(max_dev, std::abs(f[k] - mu.mu[k]));
  }
  r.result("strict_count", strict);
  r.result("max_f_minus_mu", max_dev);
  r.check("strictly_increasing", strict == opt.samples, strict, opt.samples,
          0.0);
  r.check("near_mu", max_dev < opt.eps * kPi / 2.0, max_dev,
          opt.eps * kPi / 2.0, 0.0);
  return r;
}

ExperimentResult exp_circle_flow(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "circle-flow";
  r.param("h", opt.h);
  r.param("T", opt.T);
  auto h = parse_circle_hamiltonian(opt.h);
  auto lift = flow(CircleHamiltonianPath::autonomous(h), opt.T, 512, 2048);
  double worst = 0.0;
  for (double x0 : {0.0, 0.21, 0.48, 0.77}) {
    const double x1 = lift.eval(x0);
    const double tof =
        gauss_legendre([&](double y) { return 1.0 / h(y); }, x0, x1, 64);
    worst = std::max(worst, std::abs(tof - opt.T));
  }
  r.result("max_exit_time_residual", worst);
  r.check("exit_time_identity", worst <= 1e-8, worst, 1e-8, 0.0);
  r.check("monotone", lift.strictly_increasing(), 1.0, 1.0, 0.0);
  return r;
}

ExperimentResult exp_rotnumb(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "rotnumb";
  r.param("h", opt.h);
  r.param("tol", opt.tol);
  auto h = parse_circle_hamiltonian(opt.h);
  const double rho = rotation_number_autonomous(h, 600, 512);
  const double V = metric_V(h);
  r.result("rho", rho);
  r.result("V", V);
  r.check("rotation_equals_V", std::abs(rho - V) <= opt.tol, rho, V, opt.tol);
  if (opt.h == "2+cos")
    r.check("analytic_sqrt3", std::abs(rho - std::sqrt(3.0)) <= 1e-8, rho,
            std::sqrt(3.0), 1e-8);
  return r;
}

ExperimentResult exp_nazarov(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "nazarov";
  r.param("k", opt.k);
  if (opt.extremal) {
    TrigPolynomial p = TrigPolynomial::zero(opt.k);
    p.a[0] = 1.0;
    p.a[opt.k] = 1.0;
    auto rep = nazarov_check(p);
    r.result("lhs", rep.lhs);
    r.result("rhs", rep.rhs);
    r.check("extremal_equality",
            std::abs(rep.lhs - rep.rhs) <= 1e-10 * (1.0 + rep.rhs), rep.lhs,
            rep.rhs, 1e-10);
    return r;
  }
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  int passed = 0;
  double worst = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    // Draw order per sample: c_0..c_k, each real then imaginary part.
    std::vector<Complex> c(opt.k + 1);
    for (int j = 0; j <= opt.k; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      c[j] = Complex(re, im);
    }
    auto rep = nazarov_check(TrigPolynomial::fejer_riesz(c), 1e-9, true);
    if (rep.pass) ++passed;
    if (rep.rhs > 0) worst = std::max(worst, rep.lhs / rep.rhs);
  }
  r.result("pass_rate", static_cast<double>(passed) / opt.samples);
  r.result("worst_ratio", worst);
  r.check("all_pass", passed == opt.samples, passed, opt.samples, 0.0);
  return r;
}

// Positive P_k path scaled so the endpoint displacement is a fraction of the
// quantum threshold s/(4k). Draw order per path: Fejer-Riesz coefficients
// (re, im for j = 0..k), then one phase.
CircleHamiltonianPath scaled_quantum_path(int k, double s, Rng& rng,
                                          double fraction) {
  std::vector<Complex> c(k + 1);
  for (int j = 0; j <= k; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    c[j] = Complex(re, im);
  }
  TrigPolynomial base = TrigPolynomial::fejer_riesz(c);
  base.a[0] += 0.2 * std::max(base.mean(), 1e-9);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  auto mk = [base, phase, k](double scale) {
    return CircleHamiltonianPath::from_trig(
        [base, phase, scale](double t) {
          TrigPolynomial p = base;
          const double mod = 1.0 + 0.4 * std::sin(2.0 * kPi * t + phase);
          for (int j = 0; j <= p.k; ++j) {
            p.a[j] *= scale * mod;
            p.b[j] *= scale * mod;
          }
          return p;
        },
        k);
  };
  const double target = fraction * s / (4.0 * k);
  double lo = 0.0, hi = target / std::max(base.mean(), 1e-9);
  auto probe = [&](double scale) { return max_displacement(mk(scale)); };
  while (probe(hi) < target) hi *= 2.0;
  for (int it = 0; it < 36; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return mk(lo);
}

ExperimentResult exp_quantum(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "quantum";
  r.param("k", opt.k);
  r.param("s", opt.s);
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  if (opt.extremal) {
    // gap probe: endpoint displacements swept across and beyond the
    // hypothesis threshold; reported as a table, nothing asserted (the
    // optimal constant between the two thresholds is open)
    std::vector<double> fracs, lens, disps;
    for (int i = 0; i < opt.samples; ++i) {
      const double fraction = 0.25 + 3.75 * i / std::max(1, opt.samples - 1);
      auto path = scaled_quantum_path(opt.k, opt.s, rng, fraction);
      auto rep = quantum_bound_check(path, opt.s, opt.k, 1e-6);
      fracs.push_back(fraction);
      lens.push_back(rep.length);
      disps.push_back(rep.max_disp);
    }
    r.columns.emplace_back("threshold_fraction", fracs);
    r.columns.emplace_back("max_disp", disps);
    r.columns.emplace_back("length", lens);
    return r;
  }
  int passed = 0, hyp = 0;
  double min_margin = 1e300;
  for (int i = 0; i < opt.samples; ++i) {
    const double fraction = 0.3 + 0.65 * rng.uniform();
    auto path = scaled_quantum_path(opt.k, opt.s, rng, fraction);
    auto rep = quantum_bound_check(path, opt.s, opt.k, 1e-6);
    if (rep.hypothesis) ++hyp;
    if (rep.hypothesis && rep.pass) ++passed;
    if (rep.hypothesis) min_margin = std::min(min_margin, rep.bound - rep.length);
  }
  r.result("hypothesis_count", hyp);
  r.result("pass_count", passed);
  r.result("min_margin", min_margin);
  r.check("hypothesis_all", hyp == opt.samples, hyp, opt.samples, 0.0);
  r.check("bound_all", passed == hyp, passed, hyp, 0.0);
  return r;
}

ExperimentResult exp_jk_embed(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "jk-embed";
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  Rng rng(opt.seed);
  double worst = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    // Draw order per sample: a, c, correlation, then k uniform in 1..6.
    const double a = rng.uniform(0.2, 3.0);
    const double c = rng.uniform(0.2, 3.0);
    const double b = rng.uniform(-0.9, 0.9) * std::sqrt(a * c);
    const int k = rng.uniform_int(1, 6);
    Eigen::Matrix2d S;
    S << a, b, b, c;
    TrigPolynomial p = jk_embed(S, k);
    const double V = metric_V([&](double x) { return p.eval(x); });
    worst = std::max(worst,
                     std::abs(V * k * kPi - std::sqrt(S.determinant())));
  }
  r.result("worst_residual", worst);
  r.check("scaling_identity", worst <= 1e-8, worst, 1e-8, 0.0);
  return r;
}

ExperimentResult exp_circle_long(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "circle-long";
  r.param("k", opt.k);
  r.param("eps", opt.eps);
  r.param("L", opt.L);
  auto lp = long_circle_path(opt.k, opt.eps, opt.L);
  r.result("length", lp.length);
  r.result("max_disp", lp.max_disp);
  r.result("c", lp.c);
  r.result("delta", lp.delta);
  r.check("length_at_least_L", lp.length >= opt.L, lp.length, opt.L, 0.0);
  r.check("endpoint_below_translation",
          lp.max_disp <= 1.0 / opt.k + opt.eps + 1e-9, lp.max_disp,
          1.0 / opt.k + opt.eps, 1e-9);
  return r;
}

ExperimentResult exp_secondvar(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "secondvar";
  r.param("T", opt.T);
  r.param("M", opt.M);
  r.param("L", opt.Lmodes);
  auto sv = second_variation_circle(opt.T, opt.M, opt.Lmodes);
  r.result("n_pos", sv.n_pos);
  r.result("n_neg", sv.n_neg);
  r.result("max_pos", sv.max_pos);
  r.result("min_neg", sv.min_neg);
  r.check("has_positive", sv.n_pos >= 1 && sv.max_pos > 1e-6, sv.max_pos,
          1e-6, 0.0);
  r.check("has_negative", sv.n_neg >= 1 && sv.min_neg < -1e-6, sv.min_neg,
          -1e-6, 0.0);
  return r;
}

ExperimentResult exp_ma_g(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "ma-g";
  r.param("grid_h", opt.grid_h);
  auto dom = GridDomain::disk(1.0, opt.grid_h);
  auto id2 = ConvexHamiltonianGrid::sample(dom, [](double x, double y) {
    return 0.5 * (x * x + y * y);
  });
  const double g_unit = functional_G(id2);
  r.result("g_unit_disk", g_unit);
  r.check("unit_quadratic", std::abs(g_unit - 1.0) <= 1e-9, g_unit, 1.0, 1e-9);
  auto an = ConvexHamiltonianGrid::sample(dom, [](double x, double y) {
    return 0.5 * (2.0 * x * x + 0.5 * y * y) + 0.3 * x * y;
  });
  const double g_an = functional_G(an);
  const double expect = std::sqrt(2.0 * 0.5 - 0.09);
  r.result("g_quadratic", g_an);
  r.check("quadratic_det_root", std::abs(g_an - expect) <= 1e-9, g_an, expect,
          1e-9);
  return r;
}

ExperimentResult exp_ma_varthm(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "ma-varthm";
  r.param("grid_h", opt.grid_h);
  r.param("coeff", opt.coeff);
  auto dom = GridDomain::disk(1.0, opt.grid_h);
  PlaneFieldPath quadpath = [](double t, double x, double y) {
    const double c = 1.0 + 0.25 * std::sin(2.0 * kPi * t);
    return 0.5 * c * (x * x + y * y) + 0.15 * t * x * y;
  };
  auto eq = varthm_check(dom, quadpath);
  r.result("quadratic_gap", eq.gap);
  r.check("quadratic_equality", eq.equality_flag && std::abs(eq.gap) <= eq.ma_tol,
          std::abs(eq.gap), eq.ma_tol, 0.0);
  std::vector<double> coeffs, gaps;
  double prev_gap = 1e300;
  bool monotone = true;
  double c = opt.coeff;
  for (int i = 0; i < 5; ++i, c *= 0.5) {
    PlaneFieldPath pert = [c](double, double x, double y) {
      return 0.5 * (x * x + y * y) + c * (x * x * x * x + y * y * y * y);
    };
    auto gp = varthm_check(dom, pert, 2);
    coeffs.push_back(c);
    gaps.push_back(gp.gap);
    if (gp.gap > prev_gap + 1e-12 && prev_gap > eq.ma_tol) monotone = false;
    prev_gap = gp.gap;
    r.result("gap_c" + std::to_string(i), gp.gap);
  }
  r.check("quartic_gap_above_floor", gaps.front() > eq.ma_tol, gaps.front(),
          eq.ma_tol, 0.0);
  r.check("gap_decreases", monotone, monotone ? 1.0 : 0.0, 1.0, 0.0);
  r.columns.emplace_back("coeff", coeffs);
  r.columns.emplace_back("gap", gaps);
  return r;
}

ExperimentResult exp_fiberwise(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "fiberwise";
  r.param("samples", opt.samples);
  r.param("grid_h", opt.grid_h);
  r.param("seed", static_cast<double>(opt.seed));
  auto dom = GridDomain::disk(1.0, opt.grid_h);
  PlaneFieldPath H = [](double, double x, double y) {
    const double r2 = x * x + y * y;
    return 0.5 * r2 + 0.15 * r2 * r2;
  };
  Rng rng(opt.seed);
  auto rep = fiberwise_length_identity(dom, H, opt.samples, rng, 256);
  r.result("lhs_average", rep.lhs_average);
  r.result("rhs", rep.rhs);
  r.result("rel_diff", std::abs(rep.diff) / rep.rhs);
  r.check("within_two_percent", std::abs(rep.diff) / rep.rhs <= 0.02,
          std::abs(rep.diff) / rep.rhs, 0.02, 0.0);
  return r;
}

ExperimentResult exp_ruelle(const ExperimentOptions& opt) {
  ExperimentResult r;
  r.experiment = "ruelle";
  r.param("samples", opt.samples);
  r.param("seed", static_cast<double>(opt.seed));
  auto dom = GridDomain::disk(1.0, opt.grid_h);
  PlaneFieldPath H = [](double, double x, double y) {
    const double r2 = x * x + y * y;
    const double blend = (1.0 - r2) * (1.0 - r2);
    return 0.5 * r2 + 0.08 * blend * (x * x - y * y);
  };
  Rng rng(opt.seed);
  auto rep = ruelle_maslov_average(dom, H, opt.samples, rng, 256);
  r.result("M", rep.M);
  r.result("length", rep.length);
  r.result("min_dist_minus1", rep.min_dist_minus1);
  r.check("no_minus1_crossing", rep.hypothesis, rep.min_dist_minus1, 5e-2,
          0.0);
  r.check("corti_bound", rep.bound_pass, rep.length, 2.0 * kPi * rep.M, 1e-9);
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "coindex",  "conjugate",   "length",    "maslov",    "distbound",
      "longpath", "ads3",        "timefn",    "circle-flow", "rotnumb",
      "nazarov",  "quantum",     "jk-embed",  "circle-long", "secondvar",
      "ma-g",     "ma-varthm",   "fiberwise", "ruelle"};
  return names;
}

std::vector<ExperimentResult> run_experiment(const std::string& name,
                                             const ExperimentOptions& opt) {
  if (name == "coindex") return {exp_coindex(opt)};
  if (name == "conjugate") return {exp_conjugate(opt)};
  if (name == "length") return {exp_length(opt)};
  if (name == "maslov") return {exp_maslov(opt)};
  if (name == "distbound") return {exp_distbound(opt)};
  if (name == "longpath") return {exp_longpath(opt)};
  if (name == "ads3") return {exp_ads3(opt)};
  if (name == "timefn") return {exp_timefn(opt)};
  if (name == "circle-flow") return {exp_circle_flow(opt)};
  if (name == "rotnumb") return {exp_rotnumb(opt)};
  if (name == "nazarov") return {exp_nazarov(opt)};
  if (name == "quantum") return {exp_quantum(opt)};
  if (name == "jk-embed") return {exp_jk_embed(opt)};
  if (name == "circle-long") return {exp_circle_long(opt)};
  if (name == "secondvar") return {exp_secondvar(opt)};
  if (name == "ma-g") return {exp_ma_g(opt)};
  if (name == "ma-varthm") return {exp_ma_varthm(opt)};
  if (name == "fiberwise") return {exp_fiberwise(opt)};
  if (name == "ruelle") return {exp_ruelle(opt)};
  throw DomainError("run_experiment: unknown experiment '" + name + "'");
}

std::vector<ExperimentResult> sweep_experiment(
    const std::string& name, const ExperimentOptions& base,
    const std::vector<std::pair<std::string, std::vector<double>>>& axes) {
  if (axes.empty()) throw DomainError("sweep: empty grid");
  std::vector<ExperimentResult> out;
  std::vector<size_t> idx(axes.size(), 0);
  uint64_t cell = 0;
  int pass_cells = 0, cells = 0;
  while (true) {
    ExperimentOptions opt = base;
    for (size_t a = 0; a < axes.size(); ++a) {
      const std::string& key = axes[a].first;
      const double v = axes[a].second[idx[a]];
      if (key == "k") opt.k = static_cast<int>(v);
      else if (key == "s") opt.s = v;
      else if (key == "n") opt.n = static_cast<int>(v);
      else if (key == "samples") opt.samples = static_cast<int>(v);
      else if (key == "T") opt.T = v;
      else if (key == "coeff") opt.coeff = v;
      else if (key == "L") opt.L = v;
      else if (key == "eps") opt.eps = v;
      else if (key == "M") opt.M = static_cast<int>(v);
      else throw DomainError("sweep: unknown axis '" + key + "'");
    }
    uint64_t state = base.seed;
    opt.seed = splitmix64(state) ^ (0x9e3779b97f4a7c15ULL * (cell + 1));
    auto res = run_experiment(name, opt);
    bool cell_ok = true;
    for (auto& rr : res) {
      for (size_t a = 0; a < axes.size(); ++a)
        rr.param("sweep_" + axes[a].first, axes[a].second[idx[a]]);
      if (!rr.ok()) cell_ok = false;
      out.push_back(std::move(rr));
    }
    ++cells;
    if (cell_ok) ++pass_cells;
    ++cell;
    size_t a = 0;
    while (a < axes.size()) {
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      ++a;
    }
    if (a == axes.size()) break;
  }
  ExperimentResult agg;
  agg.experiment = name + "-sweep-summary";
  agg.param("cells", cells);
  agg.result("pass_rate", static_cast<double>(pass_cells) / cells);
  agg.check("all_cells_pass", pass_cells == cells, pass_cells, cells, 0.0);
  out.push_back(std::move(agg));
  return out;
}

std::string emit_plot_data(const std::string& jsonl_content,
                           const std::string& kind) {
  std::vector<std::string> want;
  std::string experiment;
  if (kind == "longpath") {
    want = {"t", "phi", "theta", "tau", "min_eig_s"};
    experiment = "longpath";
  } else if (kind == "coindex") {
    want = {"N", "coindex"};
    experiment = "coindex";
  } else if (kind == "varthm") {
    want = {"coeff", "gap"};
    experiment = "ma-varthm";
  } else {
    throw DomainError("emit_plot_data: unknown kind '" + kind + "'");
  }
  std::istringstream is(jsonl_content);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.value("experiment", "") != experiment) continue;
    if (!j.contains("columns")) continue;
    const auto& cols = j["columns"];
    bool have_all = true;
    for (const auto& w : want)
      if (!cols.contains(w)) have_all = false;
    if (!have_all) continue;
    std::ostringstream os;
    for (size_t i = 0; i < want.size(); ++i) {
      if (i) os << ",";
      os << want[i];
    }
    os << "\n";
    const size_t rows = cols[want[0]].size();
    for (size_t rix = 0; rix < rows; ++rix) {
      for (size_t i = 0; i < want.size(); ++i) {
        if (i) os << ",";
        os << format_double(cols[want[i]][rix].get<double>());
      }
      os << "\n";
    }
    return os.str();
  }
  throw DomainError("emit_plot_data: no matching record with columns for '" +
                    kind + "' (schema mismatch)");
}

}  // namespace lorfin
