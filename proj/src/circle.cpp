#include "lorfin/circle.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <memory>
#include <numeric>

namespace lorfin {

TrigPolynomial TrigPolynomial::zero(int degree) {
  TrigPolynomial p;
  p.k = degree;
  p.a.assign(degree + 1, 0.0);
  p.b.assign(degree + 1, 0.0);
  return p;
}

TrigPolynomial TrigPolynomial::fejer_riesz(const std::vector<Complex>& c) {
  const int k = static_cast<int>(c.size()) - 1;
  TrigPolynomial p = zero(k);
  for (int d = 0; d <= k; ++d) {
    Complex r(0, 0);
    for (int j = d; j <= k; ++j) r += c[j] * std::conj(c[j - d]);
    if (d == 0) {
      p.a[0] = r.real();
    } else {
      p.a[d] = 2.0 * r.real();
      p.b[d] = -2.0 * r.imag();
    }
  }
  return p;
}

double TrigPolynomial::eval(double x) const {
  double s = a[0];
  for (int j = 1; j <= k; ++j) {
    const double c = std::cos(2.0 * kPi * j * x);
    const double sn = std::sin(2.0 * kPi * j * x);
    s += a[j] * c + b[j] * sn;
  }
  return s;
}

double TrigPolynomial::derivative_eval(double x) const {
  double s = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double w = 2.0 * kPi * j;
    s += w * (-a[j] * std::sin(2.0 * kPi * j * x) +
              b[j] * std::cos(2.0 * kPi * j * x));
  }
  return s;
}

TrigPolynomial TrigPolynomial::derivative() const {
  TrigPolynomial d = zero(k);
  for (int j = 1; j <= k; ++j) {
    d.a[j] = 2.0 * kPi * j * b[j];
    d.b[j] = -2.0 * kPi * j * a[j];
  }
  return d;
}

CircleHamiltonianPath CircleHamiltonianPath::autonomous(
    std::function<double(double)> h) {
  CircleHamiltonianPath p;
  p.H = [h = std::move(h)](double, double x) { return h(x); };
  return p;
}

CircleHamiltonianPath CircleHamiltonianPath::from_trig(
    std::function<TrigPolynomial(double)> poly, int degree) {
  CircleHamiltonianPath p;
  // One-slot cache: flows and quadratures evaluate many x at the same t.
  auto cache = std::make_shared<std::pair<double, TrigPolynomial>>(
      std::numeric_limits<double>::quiet_NaN(), TrigPolynomial::zero(degree));
  p.H = [poly = std::move(poly), cache](double t, double x) {
    if (!(cache->first == t)) *cache = {t, poly(t)};
    return cache->second.eval(x);
  };
  p.degree = degree;
  return p;
}

double CircleLift::eval(double x) const {
  const int M = grid();
  const double u = x - std::floor(x);
  const double g = u * M;
  const int i = static_cast<int>(std::floor(g));
  const double s = g - i;
  // displacement psi = phi - x is 1-periodic; cubic Lagrange on 4 nodes
  auto psi = [&](int idx) {
    const int m = ((idx % M) + M) % M;
    return phi[m] - static_cast<double>(m) / M;
  };
  const double pm1 = psi(i - 1), p0 = psi(i), p1 = psi(i + 1), p2 = psi(i + 2);
  const double c0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double c1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double c2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double c3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return x + c0 * pm1 + c1 * p0 + c2 * p1 + c3 * p2;
}

bool CircleLift::strictly_increasing() const {
  const int M = grid();
  for (int i = 0; i + 1 < M; ++i)
    if (phi[i + 1] <= phi[i]) return false;
  return phi[0] + 1.0 > phi[M - 1];
}

CircleLift flow(const CircleHamiltonianPath& H, double T, int grid,
                int steps) {
  CircleLift lift;
  lift.phi.resize(grid);
  for (int i = 0; i < grid; ++i)
    lift.phi[i] = static_cast<double>(i) / grid;
  const double h = T / steps;
  // step-major sweep: every stage evaluates H at one fixed t over the whole
  // ensemble, which keeps per-t Hamiltonian caches hot
  std::vector<double> k1(grid), k2(grid), k3(grid), k4(grid);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    for (int i = 0; i < grid; ++i) k1[i] = H.H(t, lift.phi[i]);
    for (int i = 0; i < grid; ++i)
      k2[i] = H.H(t + 0.5 * h, lift.phi[i] + 0.5 * h * k1[i]);
    for (int i = 0; i < grid; ++i)
      k3[i] = H.H(t + 0.5 * h, lift.phi[i] + 0.5 * h * k2[i]);
    for (int i = 0; i < grid; ++i)
      k4[i] = H.H(t + h, lift.phi[i] + h * k3[i]);
    for (int i = 0; i < grid; ++i)
      lift.phi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  if (!lift.strictly_increasing())
    throw ResolutionError("flow: monotonicity violated, refine the step size");
  return lift;
}

double metric_V(const std::function<double(double)>& h, int quad) {
  double s = 0.0;
  for (int i = 0; i < quad; ++i) {
    const double x = static_cast<double>(i) / quad;
    const double v = h(x);
    if (v <= 0.0) throw DomainError("metric_V: Hamiltonian not positive");
    s += 1.0 / v;
  }
  return static_cast<double>(quad) / s;
}

double length_V(const CircleHamiltonianPath& H, int t_quad, int x_quad) {
  auto slice = [&](double t) {
    return metric_V([&](double x) { return H.H(t, x); }, x_quad);
  };
  return simpson(slice, 0.0, 1.0, t_quad);
}

namespace {

double weighted_birkhoff(const std::vector<double>& d) {
  const size_t N = d.size();
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < N; ++k) {
    const double s = (k + 1.0) / (N + 1.0);
    const double w = std::exp(-1.0 / (s * (1.0 - s)));
    num += w * d[k];
    den += w;
  }
  return num / den;
}

}  // namespace

RotationEstimate translation_number(const CircleLift& lift, int iterations) {
  if (iterations < 4)
    throw DomainError("translation_number: need at least 4 iterations");
  auto orbit_estimate = [&](double x0, int N) {
    std::vector<double> disp;
    double x = x0;
    for (int k = 0; k < N; ++k) {
      const double nx = lift.eval(x);
      disp.push_back(nx - x);
      x = nx;
    }
    return weighted_birkhoff(disp);
  };
  const double e1 = orbit_estimate(0.1734, iterations);
  const double e1h = orbit_estimate(0.1734, iterations / 2);
  const double e2 = orbit_estimate(0.6117, iterations);
  RotationEstimate est;
  est.rho = 0.5 * (e1 + e2);
  est.err = std::abs(e1 - e1h) + std::abs(e1 - e2);
  return est;
}

double rotation_number_autonomous(const std::function<double(double)>& H,
                                  int iterations, int steps_per_unit) {
  // The weighted average converges superpolynomially for Diophantine
  // rotation numbers but slowly near low resonances, so the orbit is grown
  // until consecutive estimates stabilize.
  std::vector<double> disp;
  double x = 0.0;
  const double h = 1.0 / steps_per_unit;
  auto extend = [&](int upto) {
    while (static_cast<int>(disp.size()) < upto) {
      const double prev = x;
      for (int s = 0; s < steps_per_unit; ++s) {
        const double k1 = H(x);
        const double k2 = H(x + 0.5 * h * k1);
        const double k3 = H(x + 0.5 * h * k2);
        const double k4 = H(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      disp.push_back(x - prev);
    }
  };
  extend(iterations);
  double est = weighted_birkhoff(disp);
  int n = iterations;
  for (int round = 0; round < 6; ++round) {
    extend(2 * n);
    n *= 2;
    const double next = weighted_birkhoff(disp);
    const double change = std::abs(next - est);
    est = next;
    if (change < 3e-9) break;
  }
  return est;
}

std::vector<double> conjugate_instants_circle(
    const std::function<double(double)>& H, double T, int Q) {
  const double V = metric_V(H);
  std::vector<double> out;
  for (int q = 1; q <= Q; ++q) {
    for (int p = 1; p <= static_cast<int>(std::floor(T * V * q)) + 1; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double t = (static_cast<double>(p) / q) / V;
      if (t <= T + 1e-12) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double conjinst_kernel_min_singular(const std::function<double(double)>& H,
                                    double t_star, int modes, int x_grid,
                                    int t_steps) {
  if (t_steps % 2 != 0) ++t_steps;
  const int nm = 2 * modes + 1;
  // g_i[j + modes] = Simpson-in-t of e^{2 pi i j phi^t(x_i)}
  std::vector<std::vector<Complex>> g(x_grid, std::vector<Complex>(nm, 0.0));
  const double h = t_star / t_steps;
  for (int i = 0; i < x_grid; ++i) {
    double x = static_cast<double>(i) / x_grid;
    for (int s = 0; s <= t_steps; ++s) {
      const double w =
          (s == 0 || s == t_steps) ? h / 3.0 : (s % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
      const Complex z = std::exp(Complex(0.0, 2.0 * kPi * x));
      Complex zj = std::pow(z, -modes);
      for (int j = -modes; j <= modes; ++j) {
        g[i][j + modes] += w * zj;
        zj *= z;
      }
      if (s == t_steps) break;
      const double k1 = H(x);
      const double k2 = H(x + 0.5 * h * k1);
      const double k3 = H(x + 0.5 * h * k2);
      const double k4 = H(x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  CMat A(nm, nm);
  for (int m = -modes; m <= modes; ++m) {
    for (int j = -modes; j <= modes; ++j) {
      Complex acc(0, 0);
      for (int i = 0; i < x_grid; ++i) {
        const double x = static_cast<double>(i) / x_grid;
        acc += std::exp(Complex(0.0, -2.0 * kPi * m * x)) * g[i][j + modes];
      }
      A(m + modes, j + modes) = acc / static_cast<double>(x_grid);
    }
  }
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues().minCoeff();
}

CircleSecondVariation second_variation_circle(double T, int M, int L) {
  const double c2 = 2.0;  // (n+1) vol^{-1/n-1} with n = 1, vol = 1
  const int nx = 2 * M + 1;
  const int dim = nx * L;
  // x-mode overlaps: <u_a, u_b> and the antisymmetric <u_a', u_b>
  Mat xgram = Mat::Zero(nx, nx);
  Mat deriv = Mat::Zero(nx, nx);
  xgram(0, 0) = 1.0;
  for (int m = 1; m <= M; ++m) {
    xgram(2 * m - 1, 2 * m - 1) = 0.5;  // cos mode
    xgram(2 * m, 2 * m) = 0.5;          // sin mode
    deriv(2 * m - 1, 2 * m) = -kPi * m;   // <cos', sin>
    deriv(2 * m, 2 * m - 1) = kPi * m;    // <sin', cos>
  }
  // t-mode integrals on [0, T] with s_l = sin(l pi t / T)
  auto dd = [&](int l, int lp) {
    return (l == lp) ? (l * kPi / T) * (l * kPi / T) * T / 2.0 : 0.0;
  };
  auto sd = [&](int l, int lp) {  // int s_l s_lp'
    if (l == lp) return 0.0;
    if ((l + lp) % 2 == 0) return 0.0;
    return static_cast<double>(lp) * l * 2.0 /
           (static_cast<double>(l) * l - static_cast<double>(lp) * lp);
  };
  Mat B = Mat::Zero(dim, dim);
  for (int a = 0; a < nx; ++a) {
    for (int bq = 0; bq < nx; ++bq) {
      for (int l = 1; l <= L; ++l) {
        for (int lp = 1; lp <= L; ++lp) {
          double val = 0.0;
          if (a == 0 && bq == 0) val += c2 * dd(l, lp);  // mean^2 term
          val -= c2 * xgram(a, bq) * dd(l, lp);
          val -= c2 * deriv(a, bq) * sd(l, lp);
          B((l - 1) * nx + a, (lp - 1) * nx + bq) += val;
        }
      }
    }
  }
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  CircleSecondVariation out;
  out.form = B;
  out.n_pos = out.n_neg = out.n_zero = 0;
  out.max_pos = 0.0;
  out.min_neg = 0.0;
  const double thr = 1e-12 * std::max(1.0, B.norm());
  for (int i = 0; i < dim; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > thr) {
      ++out.n_pos;
      out.max_pos = std::max(out.max_pos, ev);
    } else if (ev < -thr) {
      ++out.n_neg;
      out.min_neg = std::min(out.min_neg, ev);
    } else {
      ++out.n_zero;
    }
  }
  return out;
}

NazarovReport nazarov_check(const TrigPolynomial& p, double neg_tol,
                            bool certified) {
  const int k = std::max(p.k, 1);
  double maxabs = std::abs(p.a[0]);
  for (int j = 1; j <= p.k; ++j)
    maxabs += std::abs(p.a[j]) + std::abs(p.b[j]);
  if (!certified) {
    // Dense-grid nonnegativity certificate. The grid spacing keeps the
    // possible between-node dip (bounded by max|p''| dx^2 / 8) well below
    // any significant negativity, so sampled values decide.
    const int cert = 512 * k;
    for (int i = 0; i < cert; ++i) {
      if (p.eval(static_cast<double>(i) / cert) < -neg_tol * (1.0 + maxabs))
        throw DomainError("nazarov_check: polynomial is significantly negative");
    }
  }
  // critical points of p: roots of p' by scan + bisection
  const int scan = 256 * k;
  std::vector<double> roots;
  double prev = p.derivative_eval(0.0);
  const double dscale = 1.0 + 2.0 * kPi * k * maxabs;
  for (int i = 1; i <= scan; ++i) {
    const double x = static_cast<double>(i) / scan;
    const double cur = p.derivative_eval(x);
    if (std::abs(prev) <= 1e-13 * dscale) {
      roots.push_back(static_cast<double>(i - 1) / scan);
    } else if (prev * cur < 0.0) {
      double lo = static_cast<double>(i - 1) / scan, hi = x;
      double flo = prev;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p.derivative_eval(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  NazarovReport rep;
  rep.rhs = 4.0 * p.k * p.mean();
  if (roots.empty()) {
    rep.lhs = 0.0;  // constant polynomial
  } else {
    // int |p'| equals the total variation over the critical sequence
    double tv = 0.0;
    for (size_t i = 0; i < roots.size(); ++i) {
      const double x0 = roots[i];
      const double x1 = (i + 1 < roots.size()) ? roots[i + 1] : roots[0] + 1.0;
      tv += std::abs(p.eval(x1) - p.eval(x0));
    }
    rep.lhs = tv;
  }
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-10) + 1e-12;
  return rep;
}

QuantumReport quantum_bound_check(const CircleHamiltonianPath& H, double s,
                                  int k, double tol) {
  if (s <= 0.0 || s >= 1.0)
    throw DomainError("quantum_bound_check: s must lie in (0,1)");
  if (H.degree < 0 || H.degree > k)
    throw DomainError("quantum_bound_check: Hamiltonian degree not certified <= k");
  const int grid = 128, steps = 256;
  CircleLift lift = flow(H, 1.0, grid, steps);
  QuantumReport rep;
  rep.max_disp = 0.0;
  double mean_disp = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double d = lift.phi[i] - static_cast<double>(i) / grid;
    rep.max_disp = std::max(rep.max_disp, d);
    mean_disp += d / grid;
  }
  rep.hypothesis = rep.max_disp <= s / (4.0 * k) + 1e-12;
  rep.length = length_V(H, 128, 1024);
  rep.bound = mean_disp / (1.0 - s);
  rep.pass = !rep.hypothesis || rep.length <= rep.bound + tol;
  return rep;
}

double max_displacement(const CircleHamiltonianPath& H, int grid, int steps) {
  CircleLift lift = flow(H, 1.0, grid, steps);
  double d = 0.0;
  for (int i = 0; i < grid; ++i)
    d = std::max(d, lift.phi[i] - static_cast<double>(i) / grid);
  return d;
}

TrigPolynomial jk_embed(const Eigen::Matrix2d& S, int k) {
  if ((S - S.transpose()).norm() > 1e-12 * (1.0 + S.norm()))
    throw DomainError("jk_embed: S must be symmetric");
  TrigPolynomial p = TrigPolynomial::zero(k);
  const double a = S(0, 0), c = S(1, 1), b = S(0, 1);
  p.a[0] = (a + c) / (2.0 * k * kPi);
  p.a[k] = (a - c) / (2.0 * k * kPi);
  p.b[k] = b / (k * kPi);
  return p;
}

namespace {

// Smooth plateau bump: 1 at u = 0, 0 for |u| >= 1.
double bump(double u) {
  const double v = std::abs(u);
  if (v >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

// y(T) for y' = g(y) with g >= 0 vanishing only at z*, via bisection on the
// time-of-flight integral; the orbit never crosses z*.
double advance_monotone(const std::function<double(double)>& g, double y0,
                        double z_star, double T) {
  if (g(y0) <= 0.0) return y0;
  auto tof = [&](double y) {
    // geometric panels refined toward y (integrand grows near z*)
    const int P = 96;
    double acc = 0.0;
    double lo = y0;
    for (int i = 0; i < P; ++i) {
      const double f = (std::pow(2.0, (i + 1.0) / P * 10.0) - 1.0) /
                       (std::pow(2.0, 10.0) - 1.0);
      const double hi = y0 + (y - y0) * f;
      acc += gauss_legendre([&](double z) { return 1.0 / g(z); }, lo, hi, 1);
      lo = hi;
    }
    return acc;
  };
  double lo = y0, hi = z_star - 1e-15 * (1.0 + std::abs(z_star));
  if (tof(hi) <= T) return hi;  // numerically pinned at the equilibrium
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tof(mid) < T)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * (1.0 + std::abs(hi))) break;
  }
  return lo;
}

}  // namespace

LongCirclePath long_circle_path(int k, double eps, double target_length,
                                int cert_grid) {
  if (k < 1 || eps <= 0.0 || target_length <= 0.0)
    throw DomainError("long_circle_path: invalid parameters");
  const double L = target_length;
  const double delta = std::min(0.05, eps / (4.0 * L));
  // h = eps + (c - eps)(1 - bump), dipping to eps at x = 1/2 on width delta
  auto make_h = [&](double c) {
    return [=](double x) {
      const double u = x - std::floor(x);
      return eps + (c - eps) * (1.0 - bump((u - 0.5) / (0.5 * delta)));
    };
  };
  auto vol_inv = [&](double c) {  // int_0^1 dx / h
    auto h = make_h(c);
    const double flat = (1.0 - delta) / c;
    const double dip = gauss_legendre([&](double x) { return 1.0 / h(x); },
                                      0.5 - 0.5 * delta, 0.5 + 0.5 * delta,
                                      200);
    return flat + dip;
  };
  // V(h) is increasing in c; bisect to the smallest c with V >= L
  double clo = std::max(2.0 * eps, 1.1 * L * (1.0 - delta));
  double chi = 8.0 * L + 10.0;
  while (1.0 / vol_inv(chi) < L) chi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (clo + chi);
    if (1.0 / vol_inv(mid) >= L)
      chi = mid;
    else
      clo = mid;
  }
  const double c = chi;
  auto h = make_h(c);

  LongCirclePath out;
  out.h = h;
  out.c = c;
  out.delta = delta;
  out.length = 1.0 / vol_inv(c);
  out.H.H = [h, eps, k](double t, double x) {
    return h(k * (x - eps * t));
  };
  out.H.degree = -1;

  // Endpoint certificate: x(t) = y(t) + eps t with z' = k (h(z) - eps)
  // confined below the dip equilibria; evaluated per starting point.
  auto g = [&](double y) { return h(k * y) - eps; };
  out.max_disp = 0.0;
  for (int i = 0; i < cert_grid; ++i) {
    const double y0 = static_cast<double>(i) / cert_grid;
    // first equilibrium above y0: k y = 1/2 mod 1
    double z_star = (0.5 + std::ceil(k * y0 - 0.5)) / k;
    if (z_star <= y0) z_star += 1.0 / k;
    const double y1 = advance_monotone(g, y0, z_star, 1.0);
    out.max_disp = std::max(out.max_disp, y1 + eps - y0);
  }
  out.endpoint_cert = out.max_disp <= 1.0 / k + eps + 1e-9;
  return out;
}

double diff1_time_function(const CircleLift& lift) {
  const int M = lift.grid();
  double s = 0.0;
  for (int i = 0; i < M; ++i)
    s += lift.phi[i] - static_cast<double>(i) / M;
  return s / M;
}

CircleLift conjugating_diffeo(const std::function<double(double)>& H,
                              int grid) {
  // cumulative F(y) = int_0^y dz / H on a fine grid, then rho = F^{-1}(x / V)
  const int fine = 16 * grid;
  std::vector<double> F(fine + 1, 0.0);
  for (int i = 0; i < fine; ++i) {
    const double a = static_cast<double>(i) / fine;
    const double b = static_cast<double>(i + 1) / fine;
    F[i + 1] = F[i] + gauss_legendre([&](double z) { return 1.0 / H(z); }, a, b, 1);
  }
  const double Vinv = F[fine];  // 1 / V(H)
  CircleLift rho;
  rho.phi.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double target = (static_cast<double>(i) / grid) * Vinv;
    // monotone table lookup + Newton polish (F' = 1/H)
    const auto it = std::upper_bound(F.begin(), F.end(), target);
    int idx = static_cast<int>(std::max<std::ptrdiff_t>(
        0, std::distance(F.begin(), it) - 1));
    double y = (static_cast<double>(idx) +
                (target - F[idx]) /
                    std::max(F[idx + 1] - F[idx], 1e-300)) /
               fine;
    for (int polish = 0; polish < 4; ++polish) {
      const double Fy =
          F[idx] + gauss_legendre([&](double z) { return 1.0 / H(z); },
                                  static_cast<double>(idx) / fine, y, 2);
      y -= (Fy - target) * H(y);
    }
    rho.phi[i] = y;
  }
  return rho;
}

CircleLift projective_circle_action(const Mat& W, int grid) {
  if (W.determinant() <= 0.0)
    throw DomainError("projective_circle_action: determinant must be positive");
  CircleLift lift;
  lift.phi.resize(grid);
  double prev_raw = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double u = kPi * x;
    const double vx = W(0, 0) * std::cos(u) + W(0, 1) * std::sin(u);
    const double vy = W(1, 0) * std::cos(u) + W(1, 1) * std::sin(u);
    double raw = std::atan2(vy, vx) / kPi;  // defined mod 1
    if (i == 0) {
      raw -= std::floor(raw);
    } else {
      double d = raw - prev_raw;
      d -= std::round(d);  // principal increment in (-1/2, 1/2]
      raw = prev_raw + d;
    }
    prev_raw = raw;
    lift.phi[i] = raw;
  }
  return lift;
}

TrigPolynomial random_positive_trig(int degree, Rng& rng, double floor) {
  std::vector<Complex> c(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    c[j] = Complex(re, im);
  }
  TrigPolynomial p = TrigPolynomial::fejer_riesz(c);
  const double m = std::max(p.mean(), 1e-12);
  TrigPolynomial out = TrigPolynomial::zero(degree);
  for (int j = 0; j <= degree; ++j) {
    out.a[j] = p.a[j] / m;
    out.b[j] = p.b[j] / m;
  }
  out.a[0] += floor;
  return out;
}

}  // namespace lorfin
