#pragma once

#include "lorfin/symplectic.hpp"

#include <functional>
#include <optional>

namespace lorfin {

// Time-dependent Hamiltonian Hessian t -> S(t), symmetric on [0, T].
struct GeneratorSchedule {
  int n = 0;
  double T = 0.0;
  std::function<Mat(double)> S;
};

// Discrete form of a path W(t) in Sp(2n): time grid, matrices per node and
// (optionally) generator samples S(t_k).
struct SampledSymplecticPath {
  int n = 0;
  std::vector<double> t;
  std::vector<Mat> W;
  std::vector<Mat> S;  // empty if generators are not available
  double tol = 1e-8;

  int nodes() const { return static_cast<int>(t.size()); }
  double horizon() const { return t.empty() ? 0.0 : t.back(); }
  bool has_generators() const { return !S.empty(); }
};

// Midpoint-exponential stepping W_{k+1} = exp(h J0 S(t_k + h/2)) W_k; every
// node is group-valued up to the accuracy of the matrix exponential.
SampledSymplecticPath integrate_path(const GeneratorSchedule& sched, int steps);

/// Lorentz-Finsler length of a schedule: quadrature of (det S(t))^{1/2n}.
double length_G(const GeneratorSchedule& sched, int quad_points = 1024);

/// Length of a sampled path (trapezoid on generators, or step logarithms).
double length_G(const SampledSymplecticPath& path);

/// Geodesic nodes e^{t_k X} W0 on [0, T].
SampledSymplecticPath geodesic(const ConeGenerator& X, const Mat& W0, double T,
                               int steps);

/// Jacobi field Y_Z(t) = int_0^t Ad(e^{sX}) Z ds by panel quadrature.
Mat jacobi_field(const ConeGenerator& X, const Mat& Z, double t,
                 int panels = 64);

enum class InstantSource { ClosedForm, Numeric };

struct ConjugateInstant {
  double t;
  int multiplicity;
  InstantSource source;
};

struct ConjugateReport {
  std::vector<ConjugateInstant> instants;  // sorted, t in (0, T]
  int coindex;                             // sum of multiplicities on (0, T)
};

// All conjugate instants of the geodesic e^{tX} up to T, with multiplicities
// from the eigenvalue-pair resonance formula.
ConjugateReport conjugate_instants_closed_form(const ConeGenerator& X, double T,
                                               double merge_tol = 1e-9);

// Kernel dimension of Z -> Y_Z(t*) on sp(2n) by quadrature and SVD
// thresholding; throws NumericalRankError on an ambiguous rank gap.
int conjugate_multiplicity_numeric(const ConeGenerator& X, double t_star,
                                   double svd_tol = 1e-8);

// Morse co-index of the geodesic segment [0, T]: positive eigenvalue count of
// the second variation of length_G restricted to hat functions in sp_X(2n).
struct CoindexResult {
  int coindex;
  int near_zero;  // eigenvalues within the positivity threshold of zero
};
CoindexResult coindex_discretized(const ConeGenerator& X, double T, int N,
                                  double pos_tol_scale = 1e-8);

/// Assembled hat-function index form (symmetric by construction).
Mat index_form_matrix(const ConeGenerator& X, double T, int N);

// Sup over hat-function directions of the first variation of length_G along a
// sampled timelike path (zero at geodesics).
double first_variation_sup(const SampledSymplecticPath& path);

struct BoundCheck {
  double length;
  double bound;
  bool pass;
};

// Thm-style upper bound for paths in the closed positively elliptic region:
// length_G <= (1/n) sum_j (theta_j(end) - theta_j(0)).
BoundCheck elliptic_length_bound_check(const SampledSymplecticPath& path,
                                       double tol = 1e-6);

// Latitude/longitude/time chart of Sp(2) as a conformal patch of the Einstein
// cylinder; tau is unbounded on the universal cover.
struct AdS3Point {
  double phi;    // in [0, pi/2)
  double theta;  // longitude, mod 2 pi
  double tau;    // time coordinate
};

Mat ads3_chart(const AdS3Point& p);
AdS3Point ads3_chart_inverse(const Mat& W);
/// Hyperbolic diag(a, 1/a) target lifted by `lifts` full turns.
AdS3Point ads3_hyperbolic_target(double a, int lifts);

// Piecewise-smooth timelike path id -> target with length_G >= L, built by
// climbing to high latitude, running along the time axis and descending.
SampledSymplecticPath long_path_construct(const AdS3Point& target, double L,
                                          int steps_per_unit_time = 512);

// Continuous lift of the Gelfand-Lidskii function along a path, normalized to
// mu = 0 at the start (offset by mu0 for translated paths).
struct LiftedMaslov {
  std::vector<double> t;
  std::vector<double> mu;
  int winding = 0;  // deck-transformation count of the final value
};

LiftedMaslov maslov_lift(const SampledSymplecticPath& path, double mu0 = 0.0,
                         int max_depth = 48);
// Lift along an explicit node sequence (refinement by step logarithms).
LiftedMaslov maslov_lift_nodes(const std::vector<Mat>& W,
                               const std::vector<double>& t, double mu0 = 0.0,
                               int max_depth = 48);

// Reference family for the time function: one-step exponential paths
// w_j(s) = exp(s Xi_j) with seeded generators Xi_j in sp(2n).
std::vector<Mat> time_reference_family(int two_n, int J, uint64_t seed);

// f(w) = mu(w) + eps sum_j 2^{-j} arctan mu(w w_j^{-1}), evaluated at every
// node of the path (each value uses the truncated path up to that node).
std::vector<double> time_function_profile(const SampledSymplecticPath& path,
                                          double eps, int J, uint64_t seed);

/// Time-function value for the whole path (last profile entry).
double time_function(const SampledSymplecticPath& path, double eps = 1e-2,
                     int J = 16, uint64_t seed = 0x5eedULL);

// --- seeded path generators used by tests and experiments ---
// Smooth strictly positive-definite schedule with rates of order `scale`.
GeneratorSchedule random_timelike_schedule(int two_n, double T, Rng& rng,
                                           double scale = 1.0);
// Nonnegative, somewhere-positive schedule (possibly singular S(t)).
GeneratorSchedule random_causal_schedule(int two_n, double T, Rng& rng);
// Timelike path truncated so every node stays in the closed elliptic region.
SampledSymplecticPath random_elliptic_conditioned_path(int two_n, Rng& rng,
                                                       int steps = 256,
                                                       double margin = 0.05);

// Sorted angles of a path node (wrapper over upper_half_angles).
std::vector<double> node_angles(const Mat& W);

}  // namespace lorfin
