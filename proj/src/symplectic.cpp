#include "lorfin/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

namespace lorfin {

Mat expm(const Mat& A) { return A.exp(); }

Mat logm(const Mat& A) { return A.log(); }

double symplectic_residual(const Mat& W) {
  const Mat J = standard_J(static_cast<int>(W.rows()));
  return (W.transpose() * J * W - J).norm();
}

bool is_symplectic(const Mat& W, double tol) {
  if (W.rows() != W.cols() || W.rows() % 2 != 0)
    throw DomainError("is_symplectic: matrix must be square of even size");
  if (!W.allFinite()) return false;
  if (symplectic_residual(W) > tol) return false;
  return std::abs(W.determinant() - 1.0) <= tol;
}

ConeReport cone_membership(const Mat& X, double tol) {
  if (X.rows() != X.cols() || X.rows() % 2 != 0)
    throw DomainError("cone_membership: matrix must be square of even size");
  if (!X.allFinite())
    throw DomainError("cone_membership: non-finite entries");
  const Mat J = standard_J(static_cast<int>(X.rows()));
  const Mat S = -J * X;
  const double scale = 1.0 + S.norm();
  if ((S - S.transpose()).norm() > tol * scale)
    return {ConeClass::Outside, std::numeric_limits<double>::quiet_NaN()};
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig > tol * scale) return {ConeClass::Interior, min_eig};
  if (min_eig >= -tol * scale && S.norm() > tol)
    return {ConeClass::Boundary, min_eig};
  return {ConeClass::Outside, min_eig};
}

ConeGenerator ConeGenerator::from_matrix(const Mat& X, double tol) {
  ConeReport rep = cone_membership(X, tol);
  if (rep.cls == ConeClass::Outside)
    throw DomainError("ConeGenerator: matrix outside the closed cone sp^+(2n)");
  ConeGenerator g;
  g.n = static_cast<int>(X.rows()) / 2;
  g.X = X;
  const Mat J = standard_J(static_cast<int>(X.rows()));
  g.S = 0.5 * ((-J * X) + (-J * X).transpose());
  g.min_eig_S = rep.min_eig_S;
  return g;
}

ConeGenerator ConeGenerator::from_symmetric(const Mat& S, double tol) {
  const Mat J = standard_J(static_cast<int>(S.rows()));
  return from_matrix(J * S, tol);
}

double metric_G(const ConeGenerator& X) {
  const int two_n = 2 * X.n;
  // det X = det S >= 0 on the closed cone; clamp rounding noise at zero.
  const double d = std::max(X.S.determinant(), 0.0);
  return std::pow(d, 1.0 / two_n);
}

double metric_H_quadratic_harmonic(const ConeGenerator& X) {
  if (!X.interior())
    throw DomainError("metric_H: undefined on the cone boundary");
  // sum theta_j^{-2} = -tr(X^{-2}) / 2
  const Mat Xi = X.X.inverse();
  const double s = -(Xi * Xi).trace() / 2.0;
  return 1.0 / std::sqrt(s);
}

Complex krein_form(const CVec& u, const CVec& v) {
  if (u.size() != v.size())
    throw DomainError("krein_form: dimension mismatch");
  const int two_n = static_cast<int>(u.size());
  const Mat J = standard_J(two_n);
  // kappa(u, v) = <-i J0 u, v> with <a, b> = sum a_k conj(b_k)
  const CVec a = Complex(0.0, -1.0) * (J * u);
  return (v.conjugate().transpose() * a)(0);
}

namespace {

// kappa-Gram matrix of the columns of B: M_ij with z^H M z = kappa(Bz, Bz).
CMat kappa_gram(const CMat& B) {
  const Mat J = standard_J(static_cast<int>(B.rows()));
  const CMat M = B.adjoint() * (Complex(0.0, -1.0) * (J.cast<Complex>() * B));
  return 0.5 * (M + M.adjoint());
}

struct Cluster {
  std::vector<int> members;  // indices into the eigenvalue list
  Complex rep;               // representative (mean, renormalized to |.|=1)
};

// Inertia (p, q) of kappa restricted to the invariant subspace of a cluster.
std::pair<int, int> cluster_signature(const Mat& W, const CMat& eigvecs,
                                      const CVec& eigvals,
                                      const Cluster& cl) {
  const int two_n = static_cast<int>(W.rows());
  const int m = static_cast<int>(cl.members.size());
  CMat basis(two_n, m);
  if (m == 1) {
    basis.col(0) = eigvecs.col(cl.members[0]).normalized();
  } else {
    // Generalized eigenspace as the range of the product of (W - mu I) over
    // all eigenvalues mu outside the cluster; robust for defective clusters.
    std::vector<bool> in_cluster(two_n, false);
    for (int idx : cl.members) in_cluster[idx] = true;
    CMat P = CMat::Identity(two_n, two_n);
    const CMat Wc = W.cast<Complex>();
    for (int i = 0; i < two_n; ++i) {
      if (in_cluster[i]) continue;
      P = (Wc - eigvals(i) * CMat::Identity(two_n, two_n)) * P;
      const double nrm = P.norm();
      if (nrm > 0) P /= nrm;
    }
    Eigen::JacobiSVD<CMat> svd(P, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (m < two_n && sv(m - 1) < 1e6 * sv(m))
      throw NumericalRankError(
          "krein_spectrum: invariant subspace rank is ambiguous");
    basis = svd.matrixU().leftCols(m);
  }
  // Invariance residual check.
  const CMat Wc = W.cast<Complex>();
  const CMat WB = Wc * basis;
  const CMat R = WB - basis * (basis.adjoint() * WB);
  if (R.norm() > 1e-6 * (1.0 + W.norm()))
    throw NumericalRankError(
        "krein_spectrum: invariant subspace residual above threshold");
  const CMat M = kappa_gram(basis);
  Eigen::SelfAdjointEigenSolver<CMat> es(M);
  const double thr = 1e-8 * std::max(M.norm(), 1.0);
  int p = 0, q = 0;
  for (int i = 0; i < m; ++i) {
    if (es.eigenvalues()(i) > thr)
      ++p;
    else if (es.eigenvalues()(i) < -thr)
      ++q;
  }
  if (p + q != m)
    throw NumericalRankError(
        "krein_spectrum: kappa degenerate on invariant subspace");
  return {p, q};
}

}  // namespace

KreinSpectrum krein_spectrum(const Mat& W, double circle_tol_scale,
                             double cluster_tol) {
  const int two_n = static_cast<int>(W.rows());
  if (!is_symplectic(W, 1e-6 * (1.0 + W.norm())))
    throw DomainError("krein_spectrum: matrix is not symplectic");
  Eigen::ComplexEigenSolver<CMat> es(W.cast<Complex>());
  if (es.info() != Eigen::Success)
    throw NumericalRankError("krein_spectrum: eigensolver failed");
  const CVec lam = es.eigenvalues();
  const double circle_tol = circle_tol_scale * (1.0 + W.norm());

  std::vector<int> on_circle;
  int off_count = 0, neg_real_off = 0;
  for (int i = 0; i < two_n; ++i) {
    if (std::abs(std::abs(lam(i)) - 1.0) <= circle_tol) {
      on_circle.push_back(i);
    } else {
      ++off_count;
      if (std::abs(lam(i).imag()) <= circle_tol && lam(i).real() < 0.0)
        ++neg_real_off;
    }
  }

  // Chain clustering of on-circle eigenvalues within cluster_tol.
  std::vector<Cluster> clusters;
  std::vector<bool> used(on_circle.size(), false);
  for (size_t i = 0; i < on_circle.size(); ++i) {
    if (used[i]) continue;
    Cluster cl;
    cl.members.push_back(on_circle[i]);
    used[i] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t j = 0; j < on_circle.size(); ++j) {
        if (used[j]) continue;
        for (int idx : cl.members) {
          if (std::abs(lam(on_circle[j]) - lam(idx)) <= cluster_tol) {
            cl.members.push_back(on_circle[j]);
            used[j] = true;
            grew = true;
            break;
          }
        }
      }
    }
    Complex mean(0, 0);
    for (int idx : cl.members) mean += lam(idx);
    mean /= static_cast<double>(cl.members.size());
    cl.rep = std::abs(mean) > 0 ? mean / std::abs(mean) : Complex(1, 0);
    clusters.push_back(std::move(cl));
  }

  KreinSpectrum out;
  out.off_circle_mult = off_count;
  out.neg_real_mult = neg_real_off;
  for (const auto& cl : clusters) {
    auto [p, q] = cluster_signature(W, es.eigenvectors(), lam, cl);
    UnitCircleEigen e;
    e.lambda = cl.rep;
    e.alg_mult = static_cast<int>(cl.members.size());
    e.krein_p = p;
    e.krein_q = q;
    out.circle.push_back(e);
    if (std::abs(cl.rep - Complex(-1.0, 0.0)) <= cluster_tol)
      out.neg_real_mult += e.alg_mult;
  }
  std::sort(out.circle.begin(), out.circle.end(),
            [](const UnitCircleEigen& a, const UnitCircleEigen& b) {
              return std::arg(a.lambda) < std::arg(b.lambda);
            });
  return out;
}

bool is_positively_elliptic(const Mat& W, double circle_tol_scale) {
  KreinSpectrum ks;
  try {
    ks = krein_spectrum(W, circle_tol_scale);
  } catch (const NumericalRankError&) {
    return false;
  }
  if (ks.off_circle_mult > 0) return false;
  for (const auto& e : ks.circle) {
    if (std::abs(e.lambda - Complex(1, 0)) <= 1e-6 ||
        std::abs(e.lambda + Complex(1, 0)) <= 1e-6)
      return false;
    if (e.lambda.imag() > 0 && e.krein_q != 0) return false;
    if (e.lambda.imag() < 0 && e.krein_p != 0) return false;
  }
  return true;
}

Complex gelfand_lidskii_upsilon(const Mat& W) {
  const KreinSpectrum ks = krein_spectrum(W);
  if (ks.neg_real_mult % 2 != 0)
    throw NumericalRankError("upsilon: odd negative-real multiplicity");
  const int m = ks.neg_real_mult / 2;
  Complex v = (m % 2 == 0) ? Complex(1, 0) : Complex(-1, 0);
  for (const auto& e : ks.circle) {
    if (std::abs(e.lambda - Complex(1, 0)) <= 1e-6 ||
        std::abs(e.lambda + Complex(1, 0)) <= 1e-6)
      continue;
    v *= std::pow(e.lambda, e.krein_p);
  }
  return v / std::abs(v);
}

namespace {

// kappa-orthonormalize the columns of B in place (kappa positive definite on
// their span); deterministic Gram-Schmidt in column order.
void kappa_orthonormalize(CMat& B) {
  for (int j = 0; j < B.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      const Complex c = krein_form(B.col(j), B.col(i));
      B.col(j) -= c * B.col(i);
    }
    const Complex nn = krein_form(B.col(j), B.col(j));
    if (nn.real() <= 0)
      throw NumericalRankError(
          "normal form: kappa not positive definite on eigenspace");
    B.col(j) /= std::sqrt(nn.real());
  }
}

struct SpectralPlanes {
  std::vector<double> thetas;       // one per plane, unsorted
  std::vector<CVec> vectors;        // kappa-normalized eigenvectors
};

// Common spectral machinery behind normal_form and log_elliptic: eigenvectors
// of A for its upper-half-plane eigenvalues, kappa-orthonormalized per
// cluster. theta_of maps an eigenvalue to its rotation rate/angle.
SpectralPlanes upper_half_planes(const Mat& A,
                                 const std::function<double(Complex)>& theta_of,
                                 double cluster_tol) {
  const int two_n = static_cast<int>(A.rows());
  Eigen::ComplexEigenSolver<CMat> es(A.cast<Complex>());
  if (es.info() != Eigen::Success)
    throw NumericalRankError("spectral normal form: eigensolver failed");
  const CVec lam = es.eigenvalues();
  std::vector<int> upper;
  for (int i = 0; i < two_n; ++i)
    if (lam(i).imag() > 0) upper.push_back(i);
  if (static_cast<int>(upper.size()) != two_n / 2)
    throw DomainError("spectral normal form: spectrum not off the real axis");
  // Group equal eigenvalues; within a group the splitting is not unique and
  // we fix it by Gram-Schmidt in solver order.
  std::sort(upper.begin(), upper.end(), [&](int a, int b) {
    if (lam(a).real() != lam(b).real()) return lam(a).real() < lam(b).real();
    return lam(a).imag() < lam(b).imag();
  });
  SpectralPlanes out;
  size_t i = 0;
  const double scale = 1.0 + A.norm();
  while (i < upper.size()) {
    size_t j = i;
    while (j + 1 < upper.size() &&
           std::abs(lam(upper[j + 1]) - lam(upper[i])) <= cluster_tol * scale)
      ++j;
    CMat B(two_n, j - i + 1);
    for (size_t k = i; k <= j; ++k)
      B.col(static_cast<int>(k - i)) = es.eigenvectors().col(upper[k]);
    kappa_orthonormalize(B);
    for (size_t k = i; k <= j; ++k) {
      out.thetas.push_back(theta_of(lam(upper[k])));
      out.vectors.push_back(B.col(static_cast<int>(k - i)));
    }
    i = j + 1;
  }
  return out;
}

// X = sum_j theta_j * 2 Re(w_j w_j^H) J0 realizes (+) theta_j J_j.
Mat assemble_from_planes(const SpectralPlanes& sp, int two_n) {
  const Mat J = standard_J(two_n);
  Mat X = Mat::Zero(two_n, two_n);
  for (size_t j = 0; j < sp.thetas.size(); ++j) {
    const CMat P = sp.vectors[j] * sp.vectors[j].adjoint();
    X += sp.thetas[j] * 2.0 * P.real() * J;
  }
  return X;
}

}  // namespace

Mat NormalForm::reconstruct(int two_n) const {
  Mat B(two_n, two_n), C(two_n, two_n);
  for (int j = 0; j < static_cast<int>(thetas.size()); ++j) {
    B.col(2 * j) = planes[j].first;
    B.col(2 * j + 1) = planes[j].second;
    const Eigen::Matrix2d& Jj = complex_structures[j];
    C.col(2 * j) = thetas[j] * (Jj(0, 0) * planes[j].first + Jj(1, 0) * planes[j].second);
    C.col(2 * j + 1) = thetas[j] * (Jj(0, 1) * planes[j].first + Jj(1, 1) * planes[j].second);
  }
  return C * B.inverse();
}

NormalForm normal_form(const ConeGenerator& X, double tol) {
  if (!X.interior(tol))
    throw DomainError("normal_form: generator must be in the open cone");
  SpectralPlanes sp = upper_half_planes(
      X.X, [](Complex l) { return l.imag(); }, 1e-9);
  // Sort descending by theta; stable so clusters keep their internal order.
  std::vector<size_t> order(sp.thetas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return sp.thetas[a] > sp.thetas[b];
  });
  NormalForm nf;
  const int two_n = 2 * X.n;
  for (size_t oi : order) {
    const CVec& w = sp.vectors[oi];
    nf.thetas.push_back(sp.thetas[oi]);
    Vec e = std::sqrt(2.0) * w.real();
    Vec f = -std::sqrt(2.0) * w.imag();
    nf.planes.emplace_back(e, f);
    Eigen::Matrix2d Jj;
    Jj << 0.0, -1.0, 1.0, 0.0;
    nf.complex_structures.push_back(Jj);
  }
  const double rec_err = (nf.reconstruct(two_n) - X.X).norm();
  if (rec_err > 1e-8 * (1.0 + X.X.norm()))
    throw NumericalRankError("normal_form: reconstruction residual too large");
  return nf;
}

ConeGenerator log_elliptic(const Mat& W) {
  if (!is_positively_elliptic(W))
    throw DomainError("log_elliptic: matrix is not positively elliptic");
  SpectralPlanes sp = upper_half_planes(
      W, [](Complex l) { return std::arg(l); }, 1e-9);
  const int two_n = static_cast<int>(W.rows());
  const Mat X = assemble_from_planes(sp, two_n);
  if ((expm(X) - W).norm() > 1e-8 * (1.0 + W.norm()))
    throw NumericalRankError("log_elliptic: exp(X) does not reproduce W");
  return ConeGenerator::from_matrix(X, 1e-7);
}

std::vector<double> upper_half_angles(const Mat& W, double off_circle_tol) {
  Eigen::ComplexEigenSolver<CMat> es(W.cast<Complex>());
  const CVec lam = es.eigenvalues();
  std::vector<double> all;
  for (int i = 0; i < lam.size(); ++i) {
    if (std::abs(std::abs(lam(i)) - 1.0) > off_circle_tol * (1.0 + W.norm()))
      throw DomainError("upper_half_angles: eigenvalue off the unit circle");
    all.push_back(std::abs(std::arg(lam(i))));
  }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (size_t i = 0; i + 1 < all.size(); i += 2)
    out.push_back(0.5 * (all[i] + all[i + 1]));
  return out;
}

Mat random_symmetric(int two_n, Rng& rng, double scale) {
  Mat A(two_n, two_n);
  for (int i = 0; i < two_n; ++i)
    for (int j = 0; j < two_n; ++j) A(i, j) = rng.normal();
  return scale * 0.5 * (A + A.transpose());
}

Mat random_spd(int two_n, Rng& rng, double gap) {
  const Mat B = random_symmetric(two_n, rng, 1.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  const double shift = gap - es.eigenvalues().minCoeff();
  return B + shift * Mat::Identity(two_n, two_n);
}

Mat random_symplectic(int two_n, Rng& rng, double scale) {
  const Mat J = standard_J(two_n);
  const Mat S1 = random_symmetric(two_n, rng, scale);
  const Mat S2 = random_symmetric(two_n, rng, scale);
  return expm(J * S1) * expm(J * S2);
}

ConeGenerator random_cone_generator(int two_n, Rng& rng, double gap) {
  return ConeGenerator::from_symmetric(random_spd(two_n, rng, gap));
}

Mat random_positively_elliptic(int two_n, Rng& rng, double lo, double hi) {
  Mat R = Mat::Zero(two_n, two_n);
  for (int j = 0; j < two_n / 2; ++j) {
    const double th = rng.uniform(lo, hi);
    R(2 * j, 2 * j) = std::cos(th);
    R(2 * j, 2 * j + 1) = -std::sin(th);
    R(2 * j + 1, 2 * j) = std::sin(th);
    R(2 * j + 1, 2 * j + 1) = std::cos(th);
  }
  const Mat A = random_symplectic(two_n, rng);
  return A.inverse() * R * A;
}

}  // namespace lorfin
