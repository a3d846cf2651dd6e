#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lorfin/convex.hpp"

using namespace lorfin;

namespace {

PlaneField quadratic(double sxx, double syy, double sxy) {
  return [=](double x, double y) {
    return 0.5 * (sxx * x * x + syy * y * y) + sxy * x * y;
  };
}

// radial, uniformly convex, non-quadratic; flow preserves circles
PlaneFieldPath radial_quartic(double a) {
  return [a](double, double x, double y) {
    const double r2 = x * x + y * y;
    return 0.5 * r2 + a * r2 * r2;
  };
}

}  // namespace

TEST_CASE("functional G on quadratic Hamiltonians") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  auto id2 = ConvexHamiltonianGrid::sample(dom, quadratic(1, 1, 0));
  CHECK(id2.uniformly_convex);
  CHECK(functional_G(id2) == doctest::Approx(1.0).epsilon(1e-5));

  auto an = ConvexHamiltonianGrid::sample(dom, quadratic(2.0, 0.5, 0.3));
  const double det = 2.0 * 0.5 - 0.3 * 0.3;
  CHECK(functional_G(an) == doctest::Approx(std::sqrt(det)).epsilon(1e-5));

  // convexity violation
  auto bad = ConvexHamiltonianGrid::sample(dom, quadratic(1.0, -0.5, 0.0));
  CHECK_FALSE(bad.uniformly_convex);
  CHECK_THROWS_AS(functional_G(bad), DomainError);
}

TEST_CASE("functional G converges at second order on a quartic") {
  auto H = [](double x, double y) {
    return 0.5 * (x * x + y * y) + 0.05 * (x * x * x * x + y * y * y * y);
  };
  // reference from a fine grid
  auto fine = GridDomain::disk(1.0, 1.0 / 512.0);
  const double ref = functional_G(ConvexHamiltonianGrid::sample(fine, H));
  auto d1 = GridDomain::disk(1.0, 1.0 / 32.0);
  auto d2 = GridDomain::disk(1.0, 1.0 / 64.0);
  const double e1 =
      std::abs(functional_G(ConvexHamiltonianGrid::sample(d1, H)) - ref);
  const double e2 =
      std::abs(functional_G(ConvexHamiltonianGrid::sample(d2, H)) - ref);
  CHECK(e1 / e2 > 2.5);
  CHECK(e1 / e2 < 6.0);
}

TEST_CASE("boundary functional V and the varthm check") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  PlaneFieldPath unit = [](double, double x, double y) {
    return 0.5 * (x * x + y * y);
  };
  CHECK(functional_V_of_boundary(dom, unit) == doctest::Approx(1.0).epsilon(1e-5));

  // H_t = c(t) |z|^2 / 2 gives V = int c(t) dt
  PlaneFieldPath scaled = [](double t, double x, double y) {
    return 0.5 * (1.0 + 0.5 * t) * (x * x + y * y);
  };
  CHECK(functional_V_of_boundary(dom, scaled) ==
        doctest::Approx(1.25).epsilon(1e-5));

  // quadratic path: equality within the noise floor
  PlaneFieldPath quadpath = [](double t, double x, double y) {
    const double c = 1.0 + 0.3 * std::sin(2.0 * kPi * t);
    return 0.5 * c * (x * x + y * y) + 0.2 * t * x * y;
  };
  auto eq = varthm_check(dom, quadpath);
  CHECK(eq.equality_flag);
  CHECK(std::abs(eq.gap) <= eq.ma_tol);
  CHECK(eq.length <= eq.V + 1e-12);

  // quartic perturbation: strict gap above the noise floor
  PlaneFieldPath pert = [](double, double x, double y) {
    return 0.5 * (x * x + y * y) +
           0.05 * (x * x * x * x + y * y * y * y);
  };
  auto gp = varthm_check(dom, pert);
  CHECK_FALSE(gp.equality_flag);
  CHECK(gp.gap > gp.ma_tol);
}

TEST_CASE("concavity of the averaged Hessian-root functional") {
  auto dom = GridDomain::disk(1.0, 1.0 / 48.0);
  auto H = [](double x, double y) { return 0.5 * (x * x + y * y); };
  Rng rng(31);
  auto evalG = [&](const PlaneField& F) {
    return functional_G(ConvexHamiltonianGrid::sample(dom, F));
  };
  const double base = evalG(H);
  for (int rep = 0; rep < 6; ++rep) {
    const double c1 = rng.uniform(-1.0, 1.0), c2 = rng.uniform(-1.0, 1.0);
    const double c3 = rng.uniform(-1.0, 1.0);
    auto K = [=](double x, double y) {
      return c1 * x * x * y + c2 * std::sin(x + 2.0 * y) + c3 * x * y * y;
    };
    const double eps = 1e-3;
    auto Hp = [&](double x, double y) { return H(x, y) + eps * K(x, y); };
    auto Hm = [&](double x, double y) { return H(x, y) - eps * K(x, y); };
    const double second = (evalG(Hp) - 2.0 * base + evalG(Hm)) / (eps * eps);
    CHECK(second <= 1e-8);
  }
  // radial direction K = H: exactly zero by homogeneity (eps large enough
  // that the cancellation noise of the second difference stays below 1e-8)
  const double eps = 1e-2;
  auto Hp = [&](double x, double y) { return (1.0 + eps) * H(x, y); };
  auto Hm = [&](double x, double y) { return (1.0 - eps) * H(x, y); };
  CHECK(std::abs((evalG(Hp) - 2.0 * base + evalG(Hm)) / (eps * eps)) < 1e-8);
}

TEST_CASE("midpoint concavity probe for the extension problem") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  auto evalG = [&](const PlaneField& F) {
    return functional_G(ConvexHamiltonianGrid::sample(dom, F));
  };
  // equal boundary first jets: the bump (1 - r^2)^2 has vanishing jet on r=1
  auto H1 = [](double x, double y) { return 0.5 * (x * x + y * y); };
  auto H2 = [](double x, double y) {
    const double r2 = x * x + y * y;
    return 0.5 * r2 + 0.05 * (1.0 - r2) * (1.0 - r2);
  };
  auto Hm = [&](double x, double y) { return 0.5 * (H1(x, y) + H2(x, y)); };
  const double mid = evalG(Hm);
  const double avg = 0.5 * (evalG(H1) + evalG(H2));
  CHECK(mid >= avg);
  CHECK(mid - avg > 1e-6);  // strict: H2 - H1 is not constant
}

TEST_CASE("rotation equivariance") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  auto evalG = [&](const PlaneField& F) {
    return functional_G(ConvexHamiltonianGrid::sample(dom, F));
  };
  const double cs = std::cos(0.7), sn = std::sin(0.7);
  // anisotropic quadratic: the discrete Hessian is exact, so invariance holds
  // to rounding
  auto H = quadratic(1.6, 0.7, 0.2);
  auto HR = [&](double x, double y) {
    return H(cs * x - sn * y, sn * x + cs * y);
  };
  CHECK(evalG(HR) == doctest::Approx(evalG(H)).epsilon(1e-10));
  // radial non-quadratic: exactly invariant as a function
  auto Hr = [](double x, double y) {
    const double r2 = x * x + y * y;
    return 0.5 * r2 + 0.1 * r2 * r2;
  };
  auto HrR = [&](double x, double y) {
    return Hr(cs * x - sn * y, sn * x + cs * y);
  };
  CHECK(evalG(HrR) == doctest::Approx(evalG(Hr)).epsilon(1e-12));
}

TEST_CASE("fiberwise identity: unitary quadratic is exact") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  const double th = 0.9;
  PlaneFieldPath H = [th](double, double x, double y) {
    return 0.5 * th * (x * x + y * y);
  };
  Rng rng(32);
  auto rep = fiberwise_length_identity(dom, H, 40, rng, 128);
  CHECK(rep.lhs_average == doctest::Approx(th).epsilon(1e-6));
  CHECK(rep.rhs == doctest::Approx(th).epsilon(1e-5));
}

TEST_CASE("fiberwise identity: radial non-quadratic within tolerance") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  Rng rng(33);
  auto rep = fiberwise_length_identity(dom, radial_quartic(0.15), 300, rng, 256);
  CHECK(std::abs(rep.diff) / rep.rhs < 0.02);
}

TEST_CASE("ruelle average and the eigenvalue bound") {
  auto dom = GridDomain::disk(1.0, 1.0 / 64.0);
  Rng rng(34);
  const double th = 1.1;  // in (0, pi): no -1 crossing on [0,1]
  PlaneFieldPath H = [th](double, double x, double y) {
    return 0.5 * th * (x * x + y * y);
  };
  auto rep = ruelle_maslov_average(dom, H, 20, rng, 128);
  CHECK(rep.hypothesis);
  CHECK(rep.M == doctest::Approx(th / (2.0 * kPi)).epsilon(1e-6));
  CHECK(rep.bound_pass);
  CHECK(rep.length <= 2.0 * kPi * rep.M + 1e-6);

  // blended anisotropy: admissible (radial at the boundary), positive gap
  PlaneFieldPath Ha = [](double, double x, double y) {
    const double r2 = x * x + y * y;
    const double blend = (1.0 - r2) * (1.0 - r2);
    return 0.5 * r2 + 0.08 * blend * (x * x - y * y);
  };
  auto ra = ruelle_maslov_average(dom, Ha, 20, rng, 256);
  CHECK(ra.hypothesis);
  CHECK(ra.bound_pass);
  CHECK(2.0 * kPi * ra.M - ra.length > 1e-4);

  // hypothesis violation: rotation angle beyond pi crosses -1
  PlaneFieldPath Hb = [](double, double x, double y) {
    return 0.5 * (kPi + 0.3) * (x * x + y * y);
  };
  auto rb = ruelle_maslov_average(dom, Hb, 5, rng, 128);
  CHECK_FALSE(rb.hypothesis);
}
