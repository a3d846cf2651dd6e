#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lorfin/symplectic.hpp"

using namespace lorfin;

namespace {

Mat rot2(double th) {
  Mat R(2, 2);
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return R;
}

// X conjugate to a block rotation generator with prescribed rates.
ConeGenerator cone_with_thetas(const std::vector<double>& thetas, Rng& rng) {
  const int two_n = 2 * static_cast<int>(thetas.size());
  Mat D = Mat::Zero(two_n, two_n);
  const Mat J2 = standard_J(2);
  for (size_t j = 0; j < thetas.size(); ++j)
    D.block(2 * j, 2 * j, 2, 2) = thetas[j] * J2;
  const Mat A = random_symplectic(two_n, rng);
  return ConeGenerator::from_matrix(A * D * A.inverse(), 1e-7);
}

}  // namespace

TEST_CASE("is_symplectic basic cases") {
  CHECK(is_symplectic(Mat::Identity(2, 2), 1e-12));
  CHECK(is_symplectic(rot2(0.3), 1e-12));
  Mat D(2, 2);
  D << 2, 0, 0, 1;
  CHECK_FALSE(is_symplectic(D, 1e-12));
  CHECK_THROWS_AS(is_symplectic(Mat::Identity(3, 3), 1e-12), DomainError);
}

TEST_CASE("cone membership classification") {
  const Mat J = standard_J(2);
  auto r1 = cone_membership(J);
  CHECK(r1.cls == ConeClass::Interior);
  CHECK(r1.min_eig_S == doctest::Approx(1.0));

  Mat D(2, 2);
  D << 1, 0, 0, 0;
  auto r2 = cone_membership(J * D);
  CHECK(r2.cls == ConeClass::Boundary);

  Mat X(2, 2);
  X << 1, 0, 0, -1;
  auto r3 = cone_membership(X);
  CHECK(r3.cls == ConeClass::Outside);
  CHECK(r3.min_eig_S == doctest::Approx(-1.0));
}

TEST_CASE("metric G on examples") {
  const Mat J = standard_J(4);
  CHECK(metric_G(ConeGenerator::from_matrix(standard_J(2))) == doctest::Approx(1.0));
  // theta = (1, 4) block generator: geometric mean 2
  Mat D = Mat::Zero(4, 4);
  D.block(0, 0, 2, 2) = 1.0 * standard_J(2);
  D.block(2, 2, 2, 2) = 4.0 * standard_J(2);
  CHECK(metric_G(ConeGenerator::from_matrix(D)) == doctest::Approx(2.0));
  // boundary: S = diag(1,0)
  Mat S(2, 2);
  S << 1, 0, 0, 0;
  CHECK(metric_G(ConeGenerator::from_symmetric(S)) == doctest::Approx(0.0));
  (void)J;
}

TEST_CASE("metric H quadratic harmonic") {
  Rng rng(11);
  CHECK(metric_H_quadratic_harmonic(cone_with_thetas({0.7}, rng)) ==
        doctest::Approx(0.7));
  CHECK(metric_H_quadratic_harmonic(cone_with_thetas({1.0, 1.0}, rng)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(metric_H_quadratic_harmonic(cone_with_thetas({3.0, 4.0}, rng)) ==
        doctest::Approx(12.0 / 5.0));
  Mat S(2, 2);
  S << 1, 0, 0, 0;
  CHECK_THROWS_AS(
      metric_H_quadratic_harmonic(ConeGenerator::from_symmetric(S)),
      DomainError);
}

TEST_CASE("normal form recovers rates and planes") {
  // n=1 rotation generator
  auto nf1 = normal_form(ConeGenerator::from_matrix(standard_J(2)));
  REQUIRE(nf1.thetas.size() == 1);
  CHECK(nf1.thetas[0] == doctest::Approx(1.0));

  // split-coordinate block diag(4,4,1,1) against J0
  Mat S = Mat::Zero(4, 4);
  S.diagonal() << 4, 4, 1, 1;
  auto nf2 = normal_form(ConeGenerator::from_symmetric(S));
  REQUIRE(nf2.thetas.size() == 2);
  CHECK(nf2.thetas[0] == doctest::Approx(4.0));
  CHECK(nf2.thetas[1] == doctest::Approx(1.0));

  // property oracle: G from thetas equals (det S)^{1/2n} on random spd S
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat Sr = random_spd(4, rng, 0.1);
    auto g = ConeGenerator::from_symmetric(Sr);
    auto nf = normal_form(g);
    double prod = 1.0;
    for (double th : nf.thetas) prod *= th;
    CHECK(std::pow(prod, 1.0 / 2.0) ==
          doctest::Approx(metric_G(g)).epsilon(1e-10));
    // planes pairwise omega0-orthogonal and symplectic
    const Mat J = standard_J(4);
    for (size_t a = 0; a < nf.planes.size(); ++a) {
      const Vec& e = nf.planes[a].first;
      const Vec& f = nf.planes[a].second;
      CHECK(std::abs((J * e).dot(f) - 1.0) < 1e-9);
      for (size_t b = a + 1; b < nf.planes.size(); ++b) {
        CHECK(std::abs((J * e).dot(nf.planes[b].first)) < 1e-8);
        CHECK(std::abs((J * e).dot(nf.planes[b].second)) < 1e-8);
        CHECK(std::abs((J * f).dot(nf.planes[b].first)) < 1e-8);
        CHECK(std::abs((J * f).dot(nf.planes[b].second)) < 1e-8);
      }
    }
    CHECK((nf.reconstruct(4) - g.X).norm() < 1e-8);
  }
}

TEST_CASE("krein form values and hermitian symmetry") {
  CVec u(2), v(2);
  const Complex i(0, 1);
  u << 1.0 / std::sqrt(2.0), -i / std::sqrt(2.0);
  CHECK(krein_form(u, u).real() == doctest::Approx(1.0));
  CHECK(krein_form(u, u).imag() == doctest::Approx(0.0));
  v << 1.0 / std::sqrt(2.0), i / std::sqrt(2.0);
  CHECK(krein_form(v, v).real() == doctest::Approx(-1.0));
  CHECK(std::abs(krein_form(u, v)) < 1e-15);

  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    CVec a(4), b(4);
    for (int k = 0; k < 4; ++k) {
      a(k) = Complex(rng.normal(), rng.normal());
      b(k) = Complex(rng.normal(), rng.normal());
    }
    CHECK(std::abs(krein_form(a, b) - std::conj(krein_form(b, a))) < 1e-14);
  }
}

TEST_CASE("krein spectrum on rotations, hyperbolic and -I") {
  auto ks = krein_spectrum(rot2(0.7));
  REQUIRE(ks.circle.size() == 2);
  CHECK(ks.circle[0].lambda.imag() < 0);  // sorted by argument
  CHECK(ks.circle[0].krein_p == 0);
  CHECK(ks.circle[0].krein_q == 1);
  CHECK(ks.circle[1].krein_p == 1);
  CHECK(ks.circle[1].krein_q == 0);

  Mat D(2, 2);
  D << 2, 0, 0, 0.5;
  auto kh = krein_spectrum(D);
  CHECK(kh.circle.empty());
  CHECK(kh.off_circle_mult == 2);

  auto km = krein_spectrum(-Mat::Identity(2, 2));
  REQUIRE(km.circle.size() == 1);
  CHECK(km.circle[0].alg_mult == 2);
  CHECK(km.circle[0].krein_p == 1);
  CHECK(km.circle[0].krein_q == 1);
  CHECK(km.neg_real_mult == 2);

  // defective eigenvalue 1 (shear): signature (p, p), never Krein-definite
  Mat Sh(2, 2);
  Sh << 1, 1, 0, 1;
  auto ks1 = krein_spectrum(Sh);
  REQUIRE(ks1.circle.size() == 1);
  CHECK(ks1.circle[0].alg_mult == 2);
  CHECK(ks1.circle[0].krein_p == 1);
  CHECK(ks1.circle[0].krein_q == 1);
}

TEST_CASE("signature bookkeeping sums to 2n") {
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const int two_n = (rep % 2 == 0) ? 2 : 4;
    const Mat W = random_symplectic(two_n, rng, 0.8);
    auto ks = krein_spectrum(W);
    int total = ks.off_circle_mult;
    for (const auto& e : ks.circle) {
      total += e.alg_mult;
      CHECK(e.krein_p + e.krein_q == e.alg_mult);
    }
    CHECK(total == two_n);
  }
}

TEST_CASE("positively elliptic classification") {
  CHECK(is_positively_elliptic(rot2(0.5)));
  CHECK_FALSE(is_positively_elliptic(rot2(-0.5)));
  Mat D(2, 2);
  D << 2, 0, 0, 0.5;
  CHECK_FALSE(is_positively_elliptic(D));
  CHECK_FALSE(is_positively_elliptic(-Mat::Identity(2, 2)));
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep)
    CHECK(is_positively_elliptic(random_positively_elliptic(4, rng)));
}

TEST_CASE("log_elliptic round trips and rejects -I") {
  auto x = log_elliptic(rot2(0.5));
  CHECK((x.X - 0.5 * standard_J(2)).norm() < 1e-10);

  Rng rng(9);
  for (int rep = 0; rep < 15; ++rep) {
    const int two_n = (rep % 2 == 0) ? 4 : 2;
    const Mat W = random_positively_elliptic(two_n, rng);
    auto g = log_elliptic(W);
    CHECK((expm(g.X) - W).norm() < 1e-10 * (1.0 + W.norm()));
    CHECK(g.interior(1e-9));
  }
  CHECK_THROWS_AS(log_elliptic(-Mat::Identity(2, 2)), DomainError);
}

TEST_CASE("upsilon on unitary, hyperbolic and negative hyperbolic") {
  CHECK(std::abs(gelfand_lidskii_upsilon(rot2(0.7)) -
                 std::polar(1.0, 0.7)) < 1e-12);
  Mat D(2, 2);
  D << 2, 0, 0, 0.5;
  CHECK(std::abs(gelfand_lidskii_upsilon(D) - Complex(1, 0)) < 1e-12);
  Mat Dn(2, 2);
  Dn << -2, 0, 0, -0.5;
  CHECK(std::abs(gelfand_lidskii_upsilon(Dn) - Complex(-1, 0)) < 1e-12);
}

TEST_CASE("conjugacy invariance of G, H and upsilon") {
  Rng rng(13);
  for (int rep = 0; rep < 15; ++rep) {
    const int two_n = (rep % 2 == 0) ? 2 : 4;
    auto X = random_cone_generator(two_n, rng, 0.3);
    const Mat A = random_symplectic(two_n, rng);
    auto Xc = ConeGenerator::from_matrix(A * X.X * A.inverse(), 1e-6);
    CHECK(metric_G(Xc) == doctest::Approx(metric_G(X)).epsilon(1e-10));
    CHECK(metric_H_quadratic_harmonic(Xc) ==
          doctest::Approx(metric_H_quadratic_harmonic(X)).epsilon(1e-9));

    const Mat W = random_positively_elliptic(two_n, rng);
    const Mat Wc = A * W * A.inverse();
    CHECK(std::abs(gelfand_lidskii_upsilon(W) - gelfand_lidskii_upsilon(Wc)) <
          1e-8);
  }
}

TEST_CASE("homogeneity of G") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    auto X = random_cone_generator(4, rng, 0.2);
    const double c = rng.uniform(0.1, 5.0);
    auto Xc = ConeGenerator::from_matrix(c * X.X);
    CHECK(metric_G(Xc) == doctest::Approx(c * metric_G(X)).epsilon(1e-12));
  }
}

TEST_CASE("concavity of det^{1/N} along non-radial directions") {
  Rng rng(19);
  auto f = [](const Mat& S) {
    return std::pow(S.determinant(), 1.0 / S.rows());
  };
  for (int rep = 0; rep < 20; ++rep) {
    const Mat S = random_spd(4, rng, 0.5);
    const Mat H = random_symmetric(4, rng, 1.0);
    const double eps = 1e-3;
    const double second =
        (f(S + eps * H) - 2.0 * f(S) + f(S - eps * H)) / (eps * eps);
    CHECK(second < -1e-10);  // generic H is not a multiple of S
    // radial direction: exactly zero up to rounding
    const double rad =
        (f(S + eps * S) - 2.0 * f(S) + f(S - eps * S)) / (eps * eps);
    CHECK(std::abs(rad) < 1e-8);
  }
}
