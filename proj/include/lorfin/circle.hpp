#pragma once

#include "lorfin/common.hpp"

#include <functional>

namespace lorfin {

// Real trigonometric polynomial a0 + sum_j (a_j cos(2 pi j x) + b_j sin(2 pi j x)).
struct TrigPolynomial {
  int k = 0;
  std::vector<double> a;  // size k+1
  std::vector<double> b;  // size k+1, b[0] unused

  static TrigPolynomial zero(int degree);
  // p = |sum_j c_j e^{2 pi i j x}|^2, nonnegative of degree c.size()-1.
  static TrigPolynomial fejer_riesz(const std::vector<Complex>& c);

  double eval(double x) const;
  double derivative_eval(double x) const;
  TrigPolynomial derivative() const;
  double mean() const { return a[0]; }
};

// Time-dependent Hamiltonian on [0,1] x T, 1-periodic in x.
struct CircleHamiltonianPath {
  std::function<double(double t, double x)> H;
  int degree = -1;  // trig degree in x when known, -1 otherwise

  static CircleHamiltonianPath autonomous(std::function<double(double)> h);
  static CircleHamiltonianPath from_trig(
      std::function<TrigPolynomial(double)> poly, int degree);
};

// Lift of a circle diffeomorphism sampled on a uniform grid of [0,1);
// phi(x+1) = phi(x) + 1 is implied.
struct CircleLift {
  std::vector<double> phi;  // values at x_i = i/M

  int grid() const { return static_cast<int>(phi.size()); }
  // 4-point Lagrange interpolation of the periodic displacement phi(x)-x.
  double eval(double x) const;
  bool strictly_increasing() const;
};

// Flow of dx/dt = H(t, x) from id, per grid point with fixed-step RK4.
CircleLift flow(const CircleHamiltonianPath& H, double T, int grid = 1024,
                int steps = 2048);

/// V(h) = (int_0^1 dx/h)^{-1} for a positive 1-periodic h.
double metric_V(const std::function<double(double)>& h, int quad = 4096);

/// length_V = int_0^1 V(H(t,.)) dt.
double length_V(const CircleHamiltonianPath& H, int t_quad = 256,
                int x_quad = 4096);

struct RotationEstimate {
  double rho;
  double err;  // difference between the full and half-orbit estimates
};

// Translation number of a lift by weighted Birkhoff averaging of the orbit
// displacements over `iterations` iterates.
RotationEstimate translation_number(const CircleLift& lift, int iterations);

// Translation number of the time-1 map of an autonomous positive field,
// computed from a single long ODE orbit (no interpolation error).
double rotation_number_autonomous(const std::function<double(double)>& H,
                                  int iterations = 400,
                                  int steps_per_unit = 512);

// Conjugate instants of an autonomous positive flow up to horizon T: all
// rationals p/q <= T*V(H) with q <= Q, divided by V(H). Each instant has
// infinite multiplicity; the list is truncated by the denominator bound.
std::vector<double> conjugate_instants_circle(
    const std::function<double(double)>& H, double T, int Q = 64);

// Smallest singular value of the averaging map f -> int_0^{t*} f(phi^t(x)) dt
// on Fourier modes |j| <= modes (the kernel detector behind the conjugate
// instants of the circle Reeb flow).
double conjinst_kernel_min_singular(const std::function<double(double)>& H,
                                    double t_star, int modes = 32,
                                    int x_grid = 256, int t_steps = 1024);

// Second variation of length_V at the Reeb flow H == 1 on [0, T], assembled
// on (trig degree <= M in x) x (sine series with L terms in t).
struct CircleSecondVariation {
  Mat form;
  int n_pos, n_neg, n_zero;
  double max_pos, min_neg;
};
CircleSecondVariation second_variation_circle(double T, int M, int L);

struct NazarovReport {
  double lhs;  // int |p'|
  double rhs;  // 4k int p
  bool pass;
};
// Sharp L^1 Bernstein inequality check for nonnegative trig polynomials.
// `certified` skips the dense nonnegativity grid (for inputs nonnegative by
// construction, e.g. Fejer-Riesz squares).
NazarovReport nazarov_check(const TrigPolynomial& p, double neg_tol = 1e-9,
                            bool certified = false);

struct QuantumReport {
  bool hypothesis;   // phi^1 <= id + s/(4k)
  double max_disp;   // max_x (phi^1(x) - x)
  double length;     // length_V of the path
  double bound;      // (1/(1-s)) int (phi^1 - id)
  bool pass;         // length <= bound + tol (only asserted when hypothesis)
};
QuantumReport quantum_bound_check(const CircleHamiltonianPath& H, double s,
                                  int k, double tol = 1e-9);

/// max over a grid of phi^1(x) - x (cheap probe used to rescale paths).
double max_displacement(const CircleHamiltonianPath& H, int grid = 64,
                        int steps = 192);

// Quadratic-form embedding of sp(2) rates: H_k(x) = (1/(k pi)) S z(x).z(x)
// with z(x) = (cos(k pi x), sin(k pi x)); harmonics {0, k} only.
TrigPolynomial jk_embed(const Eigen::Matrix2d& S, int k);

// Plateau construction of an arbitrarily long positive path whose endpoint
// stays below id + 1/k + eps.
struct LongCirclePath {
  CircleHamiltonianPath H;  // H_t(x) = h(k(x - eps t))
  std::function<double(double)> h;
  double c, delta;
  double length;       // length_V == V(h)
  double max_disp;     // certified max of phi^1 - id
  bool endpoint_cert;  // max_disp <= 1/k + eps
};
LongCirclePath long_circle_path(int k, double eps, double target_length,
                                int cert_grid = 128);

/// f(phi) = int_0^1 (phi(x) - x) dx, a time function on Diff_1(R).
double diff1_time_function(const CircleLift& lift);

// Lift rho with rho_*(V(H) d/dx) = H d/dx, from the inverse of the
// time-of-flight primitive x -> int_0^x dz/H.
CircleLift conjugating_diffeo(const std::function<double(double)>& H,
                              int grid = 2048);

// Lift of the projective action of a 2x2 matrix with positive determinant
// (the circle diffeomorphism induced on RP^1 identified with T).
CircleLift projective_circle_action(const Mat& W, int grid = 1024);

// Seeded strictly positive trig polynomial of the given degree.
TrigPolynomial random_positive_trig(int degree, Rng& rng, double floor = 0.2);

}  // namespace lorfin
