#include "lorfin/paths.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace lorfin {

namespace {

Mat symmetrized(const Mat& A) { return 0.5 * (A + A.transpose()); }

void check_generator_sample(const Mat& S, double t) {
  const double scale = 1.0 + S.norm();
  if ((S - S.transpose()).norm() > 1e-8 * scale)
    throw DomainError("integrate_path: non-symmetric S sample at t=" +
                      std::to_string(t));
}

double min_eig_sym(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(S));
  return es.eigenvalues().minCoeff();
}

// G of a cone element given its symmetric part, clamping rounding noise.
double g_of_sym(const Mat& S) {
  const int two_n = static_cast<int>(S.rows());
  return std::pow(std::max(S.determinant(), 0.0), 1.0 / two_n);
}

// Composite Simpson over equally spaced samples (trapezoid on a trailing
// interval when the sample count is even).
double integrate_samples(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  if (n < 2) return 0.0;
  double s = 0.0;
  size_t i = 0;
  while (i + 2 < n) {
    s += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    i += 2;
  }
  if (i + 1 < n) s += 0.5 * h * (f[i] + f[i + 1]);
  return s;
}

}  // namespace

SampledSymplecticPath integrate_path(const GeneratorSchedule& sched, int steps) {
  if (steps < 1) throw DomainError("integrate_path: need at least one step");
  const int two_n = 2 * sched.n;
  const Mat J = standard_J(two_n);
  SampledSymplecticPath path;
  path.n = sched.n;
  path.t.resize(steps + 1);
  path.W.resize(steps + 1);
  path.S.resize(steps + 1);
  const double h = sched.T / steps;
  path.t[0] = 0.0;
  path.W[0] = Mat::Identity(two_n, two_n);
  path.S[0] = symmetrized(sched.S(0.0));
  check_generator_sample(path.S[0], 0.0);
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * h;
    const Mat Sm = sched.S(tm);
    check_generator_sample(Sm, tm);
    path.W[k + 1] = expm(h * J * symmetrized(Sm)) * path.W[k];
    path.t[k + 1] = (k + 1) * h;
    path.S[k + 1] = symmetrized(sched.S(path.t[k + 1]));
    check_generator_sample(path.S[k + 1], path.t[k + 1]);
  }
  return path;
}

double length_G(const GeneratorSchedule& sched, int quad_points) {
  const double h = sched.T / quad_points;
  std::vector<double> f(quad_points + 1);
  for (int k = 0; k <= quad_points; ++k) {
    const Mat S = symmetrized(sched.S(k * h));
    if (min_eig_sym(S) < -1e-8 * (1.0 + S.norm()))
      throw CausalityError("length_G: schedule is not causal");
    f[k] = g_of_sym(S);
  }
  return integrate_samples(f, h);
}

double length_G(const SampledSymplecticPath& path) {
  if (path.nodes() < 2) return 0.0;
  if (path.has_generators()) {
    std::vector<double> f(path.nodes());
    for (int k = 0; k < path.nodes(); ++k) {
      const Mat& S = path.S[k];
      if (min_eig_sym(S) < -1e-8 * (1.0 + S.norm()))
        throw CausalityError("length_G: sampled generator is not causal");
      f[k] = g_of_sym(S);
    }
    return integrate_samples(f, path.t[1] - path.t[0]);
  }
  // No generators: accumulate G of the step logarithms, which is invariant
  // under reparametrization and under left/right translation of the path.
  const Mat J = standard_J(2 * path.n);
  double total = 0.0;
  for (int k = 0; k + 1 < path.nodes(); ++k) {
    const Mat L = logm(path.W[k + 1] * path.W[k].inverse());
    const Mat S = symmetrized(-J * L);
    if (min_eig_sym(S) < -1e-6 * (1.0 + S.norm()))
      throw CausalityError("length_G: step log is not causal");
    total += g_of_sym(S);
  }
  return total;
}

SampledSymplecticPath geodesic(const ConeGenerator& X, const Mat& W0, double T,
                               int steps) {
  SampledSymplecticPath path;
  path.n = X.n;
  path.t.resize(steps + 1);
  path.W.resize(steps + 1);
  path.S.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    path.t[k] = T * k / steps;
    path.W[k] = expm(path.t[k] * X.X) * W0;
    path.S[k] = X.S;
  }
  return path;
}

Mat jacobi_field(const ConeGenerator& X, const Mat& Z, double t, int panels) {
  const Mat J = standard_J(2 * X.n);
  if ((symmetrized(-J * Z) - (-J * Z)).norm() > 1e-7 * (1.0 + Z.norm()))
    throw DomainError("jacobi_field: Z is not in sp(2n)");
  const auto& xs = GaussLegendre10::nodes();
  const auto& ws = GaussLegendre10::weights();
  Mat Y = Mat::Zero(Z.rows(), Z.cols());
  const double h = t / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * h;
    for (size_t i = 0; i < xs.size(); ++i) {
      for (double s : {c + 0.5 * h * xs[i], c - 0.5 * h * xs[i]}) {
        const Mat E = expm(s * X.X);
        Y += ws[i] * 0.5 * h * (E * Z * E.inverse());
      }
    }
  }
  return Y;
}

namespace {

// Distinct rotation rates with multiplicities from the normal form.
struct RateSpectrum {
  std::vector<double> lambda;
  std::vector<int> mult;
};

RateSpectrum rate_spectrum(const ConeGenerator& X) {
  NormalForm nf = normal_form(X);
  RateSpectrum rs;
  for (double th : nf.thetas) {
    if (!rs.lambda.empty() &&
        std::abs(th - rs.lambda.back()) <= 1e-9 * (1.0 + std::abs(th))) {
      rs.mult.back() += 1;
    } else {
      rs.lambda.push_back(th);
      rs.mult.push_back(1);
    }
  }
  return rs;
}

bool is_positive_multiple(double t, double period, double tol) {
  const double r = t / period;
  return r > 0.5 && std::abs(r - std::round(r)) <= tol;
}

int multiplicity_formula(const RateSpectrum& rs, double t, double tol) {
  int m = 0;
  const size_t K = rs.lambda.size();
  for (size_t i = 0; i < K; ++i) {
    if (is_positive_multiple(t, kPi / rs.lambda[i], tol))
      m += rs.mult[i] * rs.mult[i] + rs.mult[i];
  }
  for (size_t i = 0; i < K; ++i) {
    for (size_t j = i + 1; j < K; ++j) {
      const double sum = rs.lambda[i] + rs.lambda[j];
      const double diff = std::abs(rs.lambda[j] - rs.lambda[i]);
      bool hit = is_positive_multiple(t, 2.0 * kPi / sum, tol);
      if (!hit && diff > 1e-12)
        hit = is_positive_multiple(t, 2.0 * kPi / diff, tol);
      if (hit) m += 2 * rs.mult[i] * rs.mult[j];
    }
  }
  return m;
}

}  // namespace

ConjugateReport conjugate_instants_closed_form(const ConeGenerator& X, double T,
                                               double merge_tol) {
  RateSpectrum rs = rate_spectrum(X);
  std::vector<double> candidates;
  auto add_family = [&](double period) {
    for (int k = 1; k * period <= T + merge_tol; ++k)
      candidates.push_back(k * period);
  };
  for (size_t i = 0; i < rs.lambda.size(); ++i) {
    add_family(kPi / rs.lambda[i]);
    for (size_t j = i + 1; j < rs.lambda.size(); ++j) {
      add_family(2.0 * kPi / (rs.lambda[i] + rs.lambda[j]));
      const double diff = std::abs(rs.lambda[j] - rs.lambda[i]);
      if (diff > 1e-12) add_family(2.0 * kPi / diff);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  ConjugateReport rep;
  rep.coindex = 0;
  const double rel = 1e-9;
  // Near-coincident candidates from different resonance families merge into
  // one instant; the formula evaluated there already sums all families.
  for (double t : candidates) {
    if (!rep.instants.empty() &&
        t - rep.instants.back().t <= merge_tol * (1.0 + t))
      continue;
    const int m = multiplicity_formula(rs, t, rel);
    if (m == 0) continue;
    rep.instants.push_back({t, m, InstantSource::ClosedForm});
    if (t < T - merge_tol * (1.0 + T)) rep.coindex += m;
  }
  return rep;
}

int conjugate_multiplicity_numeric(const ConeGenerator& X, double t_star,
                                   double svd_tol) {
  if (t_star <= 0.0)
    throw DomainError("conjugate_multiplicity_numeric: t* must be positive");
  const int two_n = 2 * X.n;
  const Mat J = standard_J(two_n);
  // The kernel dimension of Z -> Y_Z(t) is invariant under conjugation, so
  // work with the block normal form: it keeps the operator well conditioned
  // and the singular-value gap meaningful.
  NormalForm nf0 = normal_form(X);
  Mat Xb = Mat::Zero(two_n, two_n);
  for (int j = 0; j < X.n; ++j)
    Xb.block(2 * j, 2 * j, 2, 2) = nf0.thetas[j] * standard_J(2);
  const ConeGenerator Xn = ConeGenerator::from_matrix(Xb);
  // Orthonormal basis of sp(2n) = { J0 E : E symmetric } under Frobenius.
  std::vector<Mat> basis;
  for (int i = 0; i < two_n; ++i) {
    for (int j = i; j < two_n; ++j) {
      Mat E = Mat::Zero(two_n, two_n);
      if (i == j) {
        E(i, i) = 1.0;
      } else {
        E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
      }
      basis.push_back(J * E);
    }
  }
  const int d = static_cast<int>(basis.size());

  // Quadrature nodes for int_0^{t*} e^{sX} Z e^{-sX} ds, shared across Z.
  const double max_rate = nf0.thetas.front();
  const int panels =
      std::max(16, static_cast<int>(std::ceil(t_star * max_rate)) * 2);
  const auto& xs = GaussLegendre10::nodes();
  const auto& ws = GaussLegendre10::weights();
  std::vector<std::pair<double, Mat>> qnodes;  // (weight, e^{sX})
  const double h = t_star / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * h;
    for (size_t i = 0; i < xs.size(); ++i) {
      qnodes.emplace_back(ws[i] * 0.5 * h, expm((c + 0.5 * h * xs[i]) * Xn.X));
      qnodes.emplace_back(ws[i] * 0.5 * h, expm((c - 0.5 * h * xs[i]) * Xn.X));
    }
  }

  Mat L(d, d);
  for (int cidx = 0; cidx < d; ++cidx) {
    Mat Y = Mat::Zero(two_n, two_n);
    for (const auto& [w, E] : qnodes) Y += w * (E * basis[cidx] * E.inverse());
    for (int r = 0; r < d; ++r)
      L(r, cidx) = (basis[r].array() * Y.array()).sum();
  }
  Eigen::JacobiSVD<Mat> svd(L);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  int kernel = 0;
  for (int i = 0; i < d; ++i) {
    const double rel = sv(i) / smax;
    if (rel <= svd_tol) {
      ++kernel;
    } else if (rel <= 100.0 * svd_tol) {
      throw NumericalRankError(
          "conjugate_multiplicity_numeric: ambiguous singular value gap");
    }
  }
  return kernel;
}

namespace {

// Orthonormal basis of the trace-free slice sp_X(2n) = ker(Y -> tr(X^{-1}Y)).
std::vector<Mat> sp_x_basis(const ConeGenerator& X) {
  const int two_n = 2 * X.n;
  const Mat J = standard_J(two_n);
  std::vector<Mat> full;
  for (int i = 0; i < two_n; ++i) {
    for (int j = i; j < two_n; ++j) {
      Mat E = Mat::Zero(two_n, two_n);
      if (i == j)
        E(i, i) = 1.0;
      else
        E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
      full.push_back(J * E);
    }
  }
  const int d = static_cast<int>(full.size());
  const Mat Xi = X.X.inverse();
  Vec ell(d);
  for (int c = 0; c < d; ++c) ell(c) = (Xi * full[c]).trace();
  // Columns of Q after the first span the kernel of <ell, .>.
  Eigen::HouseholderQR<Mat> qr(ell);
  const Mat Q = qr.householderQ();
  std::vector<Mat> out;
  for (int c = 1; c < d; ++c) {
    Mat B = Mat::Zero(two_n, two_n);
    for (int r = 0; r < d; ++r) B += Q(r, c) * full[r];
    out.push_back(B);
  }
  return out;
}

}  // namespace

namespace {

// Hat-function discretization of the second variation on sp_X(2n): Q is the
// assembled index form, M the H^1_0 Gram matrix -d^2G(X)(Y', Y').
void assemble_index_form(const ConeGenerator& X, double T, int N, Mat& Q,
                         Mat& M) {
  if (N < 4) throw DomainError("coindex_discretized: need N >= 4");
  const std::vector<Mat> B = sp_x_basis(X);
  const int d = static_cast<int>(B.size());
  const Mat Xi = X.X.inverse();
  const int two_n = 2 * X.n;

  // Trace tensors of the second-variation density on the slice basis.
  Mat T1(d, d), T3(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      T1(a, b) = (Xi * B[a] * Xi * B[b]).trace();
      T3(a, b) = (Xi * B[a] * B[b]).trace() - (B[a] * Xi * B[b]).trace();
    }
  }
  const double c = metric_G(X) / two_n;
  const double h = T / N;
  const int m = N - 1;
  Q = Mat::Zero(m * d, m * d);
  M = Mat::Zero(m * d, m * d);
  // Hat-function overlaps: K_ij = int phi_i' phi_j', M_ij = int phi_i phi_j'.
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        Q(i * d + a, i * d + b) += -c * T1(a, b) * (2.0 / h);
        M(i * d + a, i * d + b) += c * T1(a, b) * (2.0 / h);
        if (i + 1 < m) {
          Q(i * d + a, (i + 1) * d + b) +=
              -c * (T1(a, b) * (-1.0 / h) + T3(a, b) * 0.5);
          Q((i + 1) * d + a, i * d + b) +=
              -c * (T1(a, b) * (-1.0 / h) + T3(a, b) * (-0.5));
          M(i * d + a, (i + 1) * d + b) += c * T1(a, b) * (-1.0 / h);
          M((i + 1) * d + a, i * d + b) += c * T1(a, b) * (-1.0 / h);
        }
      }
    }
  }
}

}  // namespace

Mat index_form_matrix(const ConeGenerator& X, double T, int N) {
  Mat Q, M;
  assemble_index_form(X, T, N, Q, M);
  return Q;
}

CoindexResult coindex_discretized(const ConeGenerator& X, double T, int N,
                                  double pos_tol_scale) {
  Mat Q, M;
  assemble_index_form(X, T, N, Q, M);
  // Normalize by the H^1_0 Gram matrix: the resulting pencil spectrum
  // approximates the index-form operator, a compact perturbation of minus
  // identity, so its positive part is stable under grid refinement.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Q, M, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const double scale =
      std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double pos_tol = pos_tol_scale * scale;
  CoindexResult res{0, 0};
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > pos_tol)
      ++res.coindex;
    else if (std::abs(ev) <= pos_tol)
      ++res.near_zero;
  }
  return res;
}

double first_variation_sup(const SampledSymplecticPath& path) {
  if (!path.has_generators())
    throw DomainError("first_variation_sup: needs generator samples");
  const int two_n = 2 * path.n;
  const Mat J = standard_J(two_n);
  const int N = path.nodes() - 1;
  // C(t) = (1/2n) G(X) X^{-T}; hat gradient is the difference of interval
  // averages of C, projected back onto sp(2n).
  std::vector<Mat> C(path.nodes());
  for (int k = 0; k < path.nodes(); ++k) {
    const Mat X = J * path.S[k];
    C[k] = (g_of_sym(path.S[k]) / two_n) * X.inverse().transpose();
  }
  double sup = 0.0;
  for (int i = 1; i < N; ++i) {
    const Mat left = 0.5 * (C[i - 1] + C[i]);
    const Mat right = 0.5 * (C[i] + C[i + 1]);
    const Mat D = left - right;
    const Mat proj = symmetrized(-J * D);  // sp(2n) component (isometric)
    sup = std::max(sup, proj.norm());
  }
  return sup;
}

std::vector<double> node_angles(const Mat& W) { return upper_half_angles(W); }

BoundCheck elliptic_length_bound_check(const SampledSymplecticPath& path,
                                       double tol) {
  if (path.nodes() < 2)
    throw DomainError("elliptic_length_bound_check: need at least two nodes");
  std::vector<double> first, last, prev;
  for (int k = 0; k < path.nodes(); ++k) {
    std::vector<double> ang = upper_half_angles(path.W[k]);
    if (k > 0) {
      // sorted-angle matching is only trustworthy on small displacements
      for (size_t j = 0; j < ang.size(); ++j)
        if (std::abs(ang[j] - prev[j]) > kPi / 4.0)
          throw ResolutionError(
              "elliptic_length_bound_check: node-to-node angle displacement "
              "exceeds pi/4, refine the sampling");
    }
    prev = ang;
    if (k == 0) first = ang;
    if (k == path.nodes() - 1) last = ang;
  }
  double sum = 0.0;
  for (size_t j = 0; j < first.size(); ++j) sum += last[j] - first[j];
  BoundCheck bc;
  bc.length = length_G(path);
  bc.bound = sum / path.n;
  bc.pass = bc.length <= bc.bound + tol;
  return bc;
}

Mat ads3_chart(const AdS3Point& p) {
  if (p.phi < 0.0 || p.phi >= kPi / 2.0)
    throw DomainError("ads3_chart: phi must lie in [0, pi/2)");
  Mat R(2, 2), M(2, 2);
  R << std::cos(p.tau), -std::sin(p.tau), std::sin(p.tau), std::cos(p.tau);
  M << std::cos(p.theta), std::sin(p.theta), std::sin(p.theta),
      -std::cos(p.theta);
  return R / std::cos(p.phi) + std::tan(p.phi) * M;
}

AdS3Point ads3_chart_inverse(const Mat& W) {
  if (W.rows() != 2 || W.cols() != 2)
    throw DomainError("ads3_chart_inverse: expected a 2x2 matrix");
  const double ac = 0.5 * (W(0, 0) + W(1, 1));
  const double as = 0.5 * (W(1, 0) - W(0, 1));
  const double bc = 0.5 * (W(0, 0) - W(1, 1));
  const double bs = 0.5 * (W(1, 0) + W(0, 1));
  const double a = std::hypot(ac, as);
  const double b = std::hypot(bc, bs);
  AdS3Point p;
  p.phi = std::acos(std::min(1.0, 1.0 / a));
  p.tau = std::atan2(as, ac);
  p.theta = (b > 1e-14) ? std::atan2(bs, bc) : 0.0;
  if (p.theta < 0) p.theta += 2.0 * kPi;
  return p;
}

AdS3Point ads3_hyperbolic_target(double a, int lifts) {
  if (a <= 1.0)
    throw DomainError("ads3_hyperbolic_target: need a > 1");
  AdS3Point p;
  p.phi = std::acos(2.0 / (a + 1.0 / a));
  p.theta = 0.0;
  p.tau = 2.0 * kPi * lifts;
  return p;
}

namespace {

// C^1 latitude profile climbing to phi_max, coasting, descending to phi_end.
struct LatitudeProfile {
  double slope, phi_max, phi_end, tau_end;
  double c1, c2, w;  // corner locations and blend half-width

  // phi and phi' at tau, with smoothstep-blended corners; the blend is
  // symmetric so the cornered and smoothed profiles share all phase totals.
  std::pair<double, double> eval(double tau) const {
    auto blend = [&](double s_from, double s_to, double corner, double at,
                     double phi_at_corner_minus_w) {
      const double u = (at - (corner - w)) / (2.0 * w);
      const double r = 3.0 * u * u - 2.0 * u * u * u;
      const double Rint = u * u * u - 0.5 * u * u * u * u;
      const double phi = phi_at_corner_minus_w +
                         2.0 * w * (s_from * u + (s_to - s_from) * Rint);
      const double dphi = s_from + (s_to - s_from) * r;
      return std::make_pair(phi, dphi);
    };
    const double phi_c1m = slope * (c1 - w);
    const double phi_c2p = phi_max - w * slope;
    if (tau <= c1 - w) return {slope * tau, slope};
    if (tau <= c1 + w) return blend(slope, 0.0, c1, tau, phi_c1m);
    // the blend is symmetric, so the coasting level is exactly phi_max
    if (tau <= c2 - w) return {phi_max, 0.0};
    if (tau <= c2 + w) return blend(0.0, -slope, c2, tau, phi_max);
    return {phi_c2p - slope * (tau - (c2 + w)), -slope};
  }
};

double profile_length(double slope, double phi_max, double phi_end,
                      double tau_end) {
  // Closed form for the cornered profile; the smoothed one differs by O(w).
  auto antider = [](double phi) {
    return std::log(std::abs(1.0 / std::cos(phi) + std::tan(phi)));
  };
  const double up = antider(phi_max) - antider(0.0);
  const double down = antider(phi_max) - antider(phi_end);
  const double coast =
      tau_end - (phi_max + (phi_max - phi_end)) / slope;
  const double k = std::sqrt(1.0 - slope * slope) / slope;
  return k * (up + down) + coast / std::cos(phi_max);
}

}  // namespace

SampledSymplecticPath long_path_construct(const AdS3Point& target, double L,
                                          int steps_per_unit_time) {
  const double phi1 = target.phi, tau1 = target.tau;
  if (tau1 <= kPi - phi1 + 1e-9)
    throw CausalityError(
        "long_path_construct: target must lie beyond the first elliptic "
        "diamond (tau > pi - phi)");
  const double eps =
      std::min(0.05, 0.25 * (tau1 - (kPi - phi1)) / std::max(tau1, 1.0));
  const double slope = 1.0 - eps;
  const double min_coast = 0.02 * tau1;
  const double phi_ub = std::min(kPi / 2.0 - 1e-8,
                                 0.5 * (slope * (tau1 - min_coast) + phi1));
  const double phi_lb = phi1 + 1e-6;
  if (phi_ub <= phi_lb)
    throw CausalityError("long_path_construct: no feasible latitude range");

  const int N = std::max(64, static_cast<int>(std::ceil(
                                  steps_per_unit_time * tau1)));
  const Mat J = standard_J(2);
  auto build = [&](double phi_max) {
    LatitudeProfile prof;
    prof.slope = slope;
    prof.phi_max = phi_max;
    prof.phi_end = phi1;
    prof.tau_end = tau1;
    prof.c1 = phi_max / slope;
    prof.c2 = tau1 - (phi_max - phi1) / slope;
    prof.w = std::min({1e-2 * std::max(1.0, tau1), 0.4 * prof.c1,
                       0.4 * (prof.c2 - prof.c1), 0.4 * (tau1 - prof.c2)});
    SampledSymplecticPath path;
    path.n = 1;
    path.t.resize(N + 1);
    path.W.resize(N + 1);
    path.S.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
      const double tau = tau1 * k / N;
      auto [phi, dphi] = prof.eval(tau);
      AdS3Point p{phi, target.theta, tau};
      path.t[k] = tau;
      path.W[k] = ads3_chart(p);
      // W'(tau) = d(chart)/dphi * phi' + d(chart)/dtau
      Mat R(2, 2), M(2, 2);
      R << std::cos(tau), -std::sin(tau), std::sin(tau), std::cos(tau);
      M << std::cos(p.theta), std::sin(p.theta), std::sin(p.theta),
          -std::cos(p.theta);
      const double sec = 1.0 / std::cos(phi);
      const Mat dW = (sec * std::tan(phi) * R + sec * sec * M) * dphi +
                     sec * (J * R);
      const Mat S = symmetrized(-J * dW * path.W[k].inverse());
      if (min_eig_sym(S) <= 0.0)
        throw CausalityError(
            "long_path_construct: lost timelikeness at a node");
      path.S[k] = S;
    }
    return path;
  };

  // Pick the smallest latitude whose cornered profile clears the request,
  // then grow the headroom until the smoothed path measures long enough.
  const int scan = 4000;
  double headroom = 1.05 * L + 0.5;
  for (int attempt = 0; attempt < 30; ++attempt) {
    double phi_max = phi_ub;
    for (int i = 1; i <= scan; ++i) {
      const double cand = phi_lb + (phi_ub - phi_lb) * i / scan;
      if (profile_length(slope, cand, phi1, tau1) >= headroom) {
        phi_max = cand;
        break;
      }
    }
    SampledSymplecticPath path = build(phi_max);
    if (length_G(path) >= L) return path;
    headroom *= 2.0;
  }
  throw ResolutionError("long_path_construct: could not reach target length");
}

namespace {

double principal_arg_diff(Complex a, Complex b) {
  return std::arg(b / a);
}

// Unwrapped argument increment of upsilon between two nodes, subdividing via
// step logarithms until each hop moves the argument by less than pi/2.
double upsilon_arg_increment(const Mat& Wa, const Mat& Wb, Complex ua,
                             Complex ub, int depth) {
  const double d = principal_arg_diff(ua, ub);
  if (std::abs(d) < kPi / 2.0 - 1e-3) return d;
  if (depth <= 0)
    throw ResolutionError("maslov_lift: refinement budget exceeded");
  const Mat step = Wb * Wa.inverse();
  const Mat Wm = expm(0.5 * logm(step)) * Wa;
  if (!Wm.allFinite())
    throw ResolutionError("maslov_lift: interpolation failed");
  const Complex um = gelfand_lidskii_upsilon(Wm);
  return upsilon_arg_increment(Wa, Wm, ua, um, depth - 1) +
         upsilon_arg_increment(Wm, Wb, um, ub, depth - 1);
}

}  // namespace

LiftedMaslov maslov_lift_nodes(const std::vector<Mat>& W,
                               const std::vector<double>& t, double mu0,
                               int max_depth) {
  LiftedMaslov lift;
  lift.t = t;
  lift.mu.resize(W.size());
  std::vector<Complex> ups(W.size());
  for (size_t k = 0; k < W.size(); ++k) ups[k] = gelfand_lidskii_upsilon(W[k]);
  double acc = 0.0;
  lift.mu[0] = mu0;
  for (size_t k = 0; k + 1 < W.size(); ++k) {
    acc += upsilon_arg_increment(W[k], W[k + 1], ups[k], ups[k + 1], max_depth);
    lift.mu[k + 1] = mu0 + acc / (2.0 * kPi);
  }
  lift.winding = static_cast<int>(
      std::lround(lift.mu.back() - std::arg(ups.back()) / (2.0 * kPi)));
  return lift;
}

LiftedMaslov maslov_lift(const SampledSymplecticPath& path, double mu0,
                         int max_depth) {
  return maslov_lift_nodes(path.W, path.t, mu0, max_depth);
}

std::vector<Mat> time_reference_family(int two_n, int J, uint64_t seed) {
  Rng rng(seed);
  const Mat J0 = standard_J(two_n);
  std::vector<Mat> xi;
  for (int j = 0; j < J; ++j) {
    const double c = 0.35 + 0.55 * (j % 8);
    xi.push_back(c * J0 + J0 * random_symmetric(two_n, rng, 0.35));
  }
  return xi;
}

std::vector<double> time_function_profile(const SampledSymplecticPath& path,
                                          double eps, int J, uint64_t seed) {
  const LiftedMaslov base = maslov_lift(path);
  std::vector<double> f(base.mu.begin(), base.mu.end());
  const std::vector<Mat> xis = time_reference_family(2 * path.n, J, seed);
  for (int j = 0; j < J; ++j) {
    // mu of the reference element from its own one-step exponential path.
    const int m = 48;
    std::vector<Mat> wj(m + 1);
    std::vector<double> tj(m + 1);
    for (int k = 0; k <= m; ++k) {
      tj[k] = static_cast<double>(k) / m;
      wj[k] = expm(tj[k] * xis[j]);
    }
    const double mu_j = maslov_lift_nodes(wj, tj).mu.back();
    // Lift along s -> W(s) Wj^{-1}, starting at the inverse element.
    const Mat Wj_inv = wj.back().inverse();
    std::vector<Mat> prod(path.W.size());
    for (size_t k = 0; k < path.W.size(); ++k) prod[k] = path.W[k] * Wj_inv;
    const LiftedMaslov lp = maslov_lift_nodes(prod, path.t, -mu_j);
    const double weight = eps * std::pow(2.0, -(j + 1));
    for (size_t k = 0; k < f.size(); ++k)
      f[k] += weight * std::atan(lp.mu[k]);
  }
  return f;
}

double time_function(const SampledSymplecticPath& path, double eps, int J,
                     uint64_t seed) {
  return time_function_profile(path, eps, J, seed).back();
}

GeneratorSchedule random_timelike_schedule(int two_n, double T, Rng& rng,
                                           double scale) {
  const Mat S0 = scale * random_spd(two_n, rng, 0.5);
  Mat H1 = random_symmetric(two_n, rng, 1.0);
  Mat H2 = random_symmetric(two_n, rng, 1.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(S0);
  const double margin = 0.4 * es.eigenvalues().minCoeff();
  H1 *= margin / H1.operatorNorm();
  H2 *= margin / H2.operatorNorm();
  const double w1 = rng.uniform(0.5, 2.0) * 2.0 * kPi / T;
  const double w2 = rng.uniform(0.5, 2.0) * 2.0 * kPi / T;
  const double p1 = rng.uniform(0.0, 2.0 * kPi);
  const double p2 = rng.uniform(0.0, 2.0 * kPi);
  GeneratorSchedule sched;
  sched.n = two_n / 2;
  sched.T = T;
  sched.S = [=](double t) {
    return Mat(S0 + std::sin(w1 * t + p1) * H1 + std::cos(w2 * t + p2) * H2);
  };
  return sched;
}

GeneratorSchedule random_causal_schedule(int two_n, double T, Rng& rng) {
  // Rank-deficient psd schedule: a sum of two drifting rank-one terms.
  Vec v1(two_n), v2(two_n);
  for (int i = 0; i < two_n; ++i) v1(i) = rng.normal();
  for (int i = 0; i < two_n; ++i) v2(i) = rng.normal();
  v1.normalize();
  v2.normalize();
  const double w = rng.uniform(0.5, 1.5) * 2.0 * kPi / T;
  const double p = rng.uniform(0.0, 2.0 * kPi);
  GeneratorSchedule sched;
  sched.n = two_n / 2;
  sched.T = T;
  sched.S = [=](double t) {
    const double a = 1.0 + std::sin(w * t + p);
    const double b = 1.0 + std::cos(w * t);
    return Mat(a * v1 * v1.transpose() + b * v2 * v2.transpose() +
               1e-3 * Mat::Identity(two_n, two_n));
  };
  return sched;
}

SampledSymplecticPath random_elliptic_conditioned_path(int two_n, Rng& rng,
                                                       int steps,
                                                       double margin) {
  GeneratorSchedule sched = random_timelike_schedule(two_n, 3.0, rng, 0.6);
  SampledSymplecticPath full = integrate_path(sched, steps);
  int keep = 0;
  for (int k = 0; k < full.nodes(); ++k) {
    bool ok = true;
    try {
      std::vector<double> ang = upper_half_angles(full.W[k]);
      for (double a : ang)
        if (a > kPi - margin) ok = false;
    } catch (const DomainError&) {
      ok = false;
    }
    if (!ok) break;
    keep = k;
  }
  if (keep < 2)
    throw ResolutionError("random_elliptic_conditioned_path: path too short");
  SampledSymplecticPath out;
  out.n = full.n;
  out.t.assign(full.t.begin(), full.t.begin() + keep + 1);
  out.W.assign(full.W.begin(), full.W.begin() + keep + 1);
  out.S.assign(full.S.begin(), full.S.begin() + keep + 1);
  out.tol = full.tol;
  return out;
}

}  // namespace lorfin
