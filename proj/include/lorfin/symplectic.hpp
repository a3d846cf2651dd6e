#pragma once

#include "lorfin/common.hpp"

namespace lorfin {

// Matrix exponential (scaling-and-squaring with Pade) and principal logarithm
// of a matrix with no eigenvalues on the closed negative real axis.
Mat expm(const Mat& A);
Mat logm(const Mat& A);

/// Frobenius test of W^T J0 W = J0 (and det W = 1 within tolerance).
bool is_symplectic(const Mat& W, double tol);

/// Residual ||W^T J0 W - J0||_F, for diagnostics.
double symplectic_residual(const Mat& W);

enum class ConeClass { Interior, Boundary, Outside };

struct ConeReport {
  ConeClass cls;
  double min_eig_S;  // smallest eigenvalue of S = -J0 X (NaN if S not symmetric)
};

// Classify X against the cone sp^+(2n): Interior iff S = -J0 X is symmetric
// positive definite, Boundary iff S is psd with nontrivial kernel and S != 0.
ConeReport cone_membership(const Mat& X, double tol = 1e-9);

// An element X = J0 S of the closure of sp^+(2n), with its symmetric part.
struct ConeGenerator {
  int n = 0;
  Mat X;
  Mat S;
  double min_eig_S = 0.0;

  // Validates membership in the closed cone; throws DomainError otherwise.
  static ConeGenerator from_matrix(const Mat& X, double tol = 1e-9);
  // Convenience: X = J0 S from a symmetric positive (semi)definite S.
  static ConeGenerator from_symmetric(const Mat& S, double tol = 1e-9);

  bool interior(double tol = 1e-9) const { return min_eig_S > tol; }
};

/// G(X) = (det X)^{1/2n}; zero on the cone boundary.
double metric_G(const ConeGenerator& X);

/// Second invariant metric: (sum_j theta_j^{-2})^{-1/2}. Interior only.
double metric_H_quadratic_harmonic(const ConeGenerator& X);

// Normal form X = (+) theta_j J_j over pairwise omega0-orthogonal symplectic
// planes, theta_j > 0 sorted descending.
struct NormalForm {
  std::vector<double> thetas;
  // plane j is spanned by (e_j, f_j) with omega0(e_j, f_j) = 1
  std::vector<std::pair<Vec, Vec>> planes;
  // J_j expressed in the (e_j, f_j) basis
  std::vector<Eigen::Matrix2d> complex_structures;
  Mat reconstruct(int two_n) const;
};

NormalForm normal_form(const ConeGenerator& X, double tol = 1e-9);

/// Krein form kappa(u, v) = <-i J0 u, v>, Hermitian of signature (n, n).
Complex krein_form(const CVec& u, const CVec& v);

struct UnitCircleEigen {
  Complex lambda;   // representative on the unit circle
  int alg_mult;     // algebraic multiplicity of the cluster
  int krein_p;      // positive inertia of kappa on the invariant subspace
  int krein_q;      // negative inertia
};

struct KreinSpectrum {
  std::vector<UnitCircleEigen> circle;  // clusters on the unit circle
  int off_circle_mult;                  // total multiplicity off the circle
  int neg_real_mult;                    // total multiplicity of negative real
                                        // eigenvalues (on or off the circle)
};

// Cluster the unit-circle spectrum of a symplectic W and compute the Krein
// signature of each cluster from the inertia of the kappa-Gram matrix on a
// numerically invariant subspace. circle_tol_scale is relative to 1 + ||W||.
KreinSpectrum krein_spectrum(const Mat& W, double circle_tol_scale = 1e-8,
                             double cluster_tol = 1e-6);

/// True iff the spectrum lies on U \ {±1} with Krein-positive eigenvalues in
/// the upper half plane.
bool is_positively_elliptic(const Mat& W, double circle_tol_scale = 1e-8);

// Inverse of exp on the positively elliptic region, built from the spectral
// normal form so that the rotation angles land in (0, pi).
ConeGenerator log_elliptic(const Mat& W);

/// Gelfand-Lidskii circle function v(W) = (-1)^m prod lambda^{p(lambda)}.
Complex gelfand_lidskii_upsilon(const Mat& W);

// Sorted (ascending) angles in [0, pi] of the upper-half-plane eigenvalues of
// a matrix with spectrum on the unit circle. Used for elliptic length bounds.
std::vector<double> upper_half_angles(const Mat& W, double off_circle_tol = 1e-6);

// --- seeded random generators used across tests and experiments ---
// Draw order: entries are drawn row-major from the given Rng.
Mat random_symmetric(int two_n, Rng& rng, double scale = 1.0);
Mat random_spd(int two_n, Rng& rng, double gap = 0.2);   // eigenvalues >= gap
Mat random_symplectic(int two_n, Rng& rng, double scale = 0.5);
ConeGenerator random_cone_generator(int two_n, Rng& rng, double gap = 0.2);
// Positively elliptic W = A^{-1} (+ e^{theta_j J0}) A with theta in (lo, hi).
Mat random_positively_elliptic(int two_n, Rng& rng, double lo = 0.1,
                               double hi = kPi - 0.1);

}  // namespace lorfin
