#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lorfin/circle.hpp"

using namespace lorfin;

namespace {

std::function<double(double)> two_plus_cos() {
  return [](double x) { return 2.0 + std::cos(2.0 * kPi * x); };
}

}  // namespace

TEST_CASE("metric_V values") {
  CHECK(metric_V([](double) { return 3.7; }) == doctest::Approx(3.7));
  CHECK(metric_V(two_plus_cos()) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  // concavity consistency on random positive pairs
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    TrigPolynomial p1 = random_positive_trig(3, rng);
    TrigPolynomial p2 = random_positive_trig(3, rng);
    auto h1 = [&](double x) { return p1.eval(x); };
    auto h2 = [&](double x) { return p2.eval(x); };
    auto hm = [&](double x) { return 0.5 * (p1.eval(x) + p2.eval(x)); };
    CHECK(metric_V(hm) >= 0.5 * (metric_V(h1) + metric_V(h2)) - 1e-9);
  }
  CHECK_THROWS_AS(metric_V([](double x) { return x - 0.5; }), DomainError);
}

TEST_CASE("length_V: constants, autonomous slices, reparametrization") {
  auto c = CircleHamiltonianPath::autonomous([](double) { return 1.3; });
  CHECK(length_V(c) == doctest::Approx(1.3).epsilon(1e-12));

  auto h = two_plus_cos();
  auto aut = CircleHamiltonianPath::autonomous(h);
  CHECK(length_V(aut) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));

  // invariance under the time change tau(t) = (t + t^2)/2
  CircleHamiltonianPath rep;
  rep.H = [h](double t, double x) {
    const double tau = 0.5 * (t + t * t);
    (void)tau;
    return 0.5 * (1.0 + 2.0 * t) * h(x);
  };
  CHECK(length_V(rep) == doctest::Approx(length_V(aut)).epsilon(1e-9));

  // geodesic slice over horizon T carries length T V(H)
  const double T = 2.7;
  auto horizon = CircleHamiltonianPath::autonomous(
      [h, T](double x) { return T * h(x); });
  CHECK(length_V(horizon) ==
        doctest::Approx(T * metric_V(h)).epsilon(1e-10));
}

TEST_CASE("flow: translations, exit time, reversal, group property") {
  auto c = CircleHamiltonianPath::autonomous([](double) { return 0.37; });
  auto lift = flow(c, 1.0, 256, 128);
  for (int i = 0; i < lift.grid(); ++i)
    CHECK(lift.phi[i] == doctest::Approx(static_cast<double>(i) / 256 + 0.37)
                             .epsilon(1e-12));

  auto h = two_plus_cos();
  auto aut = CircleHamiltonianPath::autonomous(h);
  const double T = 0.8;
  auto lf = flow(aut, T, 512, 1024);
  // exit-time identity int_x^{phi^T(x)} dy/H = T
  for (double x0 : {0.0, 0.31, 0.77}) {
    const double x1 = lf.eval(x0);
    const double tof =
        gauss_legendre([&](double y) { return 1.0 / h(y); }, x0, x1, 64);
    CHECK(tof == doctest::Approx(T).epsilon(1e-8));
  }
  // time reversal round trip
  CircleHamiltonianPath back;
  back.H = [&](double t, double x) { return -h(x) * 1.0 + 0.0 * t; };
  auto lb = flow(back, 0.0 + T, 512, 1024);
  for (double x0 : {0.05, 0.5, 0.93})
    CHECK(lb.eval(lf.eval(x0)) == doctest::Approx(x0).epsilon(1e-8));
  // group property of the autonomous flow
  auto l1 = flow(aut, 0.3, 512, 512);
  auto l2 = flow(aut, 0.5, 512, 512);
  auto l3 = flow(aut, 0.8, 512, 1024);
  for (double x0 : {0.12, 0.64})
    CHECK(l2.eval(l1.eval(x0)) == doctest::Approx(l3.eval(x0)).epsilon(1e-8));

  // a step size too coarse for the field is refused
  auto steep = CircleHamiltonianPath::autonomous(
      [](double x) { return 0.2 + 30.0 * (1.0 + std::sin(2.0 * kPi * x)); });
  CHECK_THROWS_AS(flow(steep, 1.0, 64, 2), ResolutionError);
}

TEST_CASE("translation numbers") {
  // exact translation
  CircleLift tr;
  tr.phi.resize(128);
  for (int i = 0; i < 128; ++i) tr.phi[i] = i / 128.0 + 0.4321;
  auto est = translation_number(tr, 64);
  CHECK(est.rho == doctest::Approx(0.4321).epsilon(1e-12));

  // autonomous identity rho = V(H), analytic case to 1e-8
  const double rho = rotation_number_autonomous(two_plus_cos(), 400, 512);
  CHECK(std::abs(rho - std::sqrt(3.0)) < 1e-8);

  // random autonomous fields to 1e-6 through the generic lift machinery
  Rng rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    TrigPolynomial p = random_positive_trig(2, rng, 0.4);
    auto h = [&](double x) { return p.eval(x); };
    auto lift = flow(CircleHamiltonianPath::autonomous(h), 1.0, 2048, 2048);
    auto e = translation_number(lift, 1200);
    CHECK(std::abs(e.rho - metric_V(h)) < 1e-6);
    CHECK(std::abs(e.rho - metric_V(h)) < 10.0 * e.err + 1e-9);
  }

  // a lift with fixed points has zero translation number
  Mat W(2, 2);
  W << 2.0, 0.0, 0.0, 0.5;
  auto hyp = projective_circle_action(W, 1024);
  auto ez = translation_number(hyp, 200);
  CHECK(std::abs(ez.rho) < 1e-9);
}

TEST_CASE("circle conjugate instants: rational times 1/V") {
  auto ones = [](double) { return 1.0; };
  auto inst = conjugate_instants_circle(ones, 2.5, 5);
  // p/q <= 2.5 with q <= 5, reduced fractions
  CHECK(std::find_if(inst.begin(), inst.end(), [](double t) {
          return std::abs(t - 0.2) < 1e-12;
        }) != inst.end());
  CHECK(std::find_if(inst.begin(), inst.end(), [](double t) {
          return std::abs(t - 1.0) < 1e-12;
        }) != inst.end());
  CHECK(std::find_if(inst.begin(), inst.end(), [](double t) {
          return std::abs(t - 2.5) < 1e-12;
        }) != inst.end());
  for (double t : inst) CHECK(t <= 2.5 + 1e-12);
  CHECK(std::is_sorted(inst.begin(), inst.end()));

  // general H: instants agree with the conjugated constant field
  auto h = two_plus_cos();
  const double V = metric_V(h);
  auto ih = conjugate_instants_circle(h, 1.0, 7);
  for (double t : ih) {
    // t * V must be rational with denominator <= 7
    double best = 1.0;
    for (int q = 1; q <= 7; ++q)
      best = std::min(best, std::abs(t * V * q - std::round(t * V * q)));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("Fourier kernel detector for conjugate instants") {
  auto h = [](double x) { return 1.0 + 0.3 * std::cos(2.0 * kPi * x); };
  const double V = metric_V(h);
  const double sig_rat =
      conjinst_kernel_min_singular(h, 0.5 / V, 32, 192, 512);
  const double sig_irr = conjinst_kernel_min_singular(
      h, (std::sqrt(2.0) / 2.0) / V, 32, 192, 512);
  CHECK(sig_rat < 1e-10);
  CHECK(sig_irr > 5e-4);
  CHECK(sig_rat / sig_irr < 1e-6);
}

TEST_CASE("conjugating diffeomorphism straightens the field") {
  auto h = two_plus_cos();
  const double V = metric_V(h);
  auto rho = conjugating_diffeo(h, 1024);
  CHECK(rho.strictly_increasing());
  // V rho'(x) = H(rho(x))
  const double fd = 1e-5;
  for (double x0 : {0.1, 0.45, 0.8}) {
    const double drho = (rho.eval(x0 + fd) - rho.eval(x0 - fd)) / (2.0 * fd);
    CHECK(V * drho == doctest::Approx(h(rho.eval(x0))).epsilon(1e-8));
  }
  // flow conjugation: phi_H^t(rho(x)) = rho(x + V t)
  auto lf = flow(CircleHamiltonianPath::autonomous(h), 0.6, 1024, 1024);
  for (double x0 : {0.2, 0.55})
    CHECK(lf.eval(rho.eval(x0)) ==
          doctest::Approx(rho.eval(x0 + V * 0.6)).epsilon(1e-7));
}

TEST_CASE("second variation of the circle Reeb flow is indefinite") {
  auto sv = second_variation_circle(kPi, 4, 4);
  CHECK((sv.form - sv.form.transpose()).norm() < 1e-12);
  CHECK(sv.n_pos >= 1);
  CHECK(sv.n_neg >= 1);
  CHECK(sv.max_pos > 1e-6);
  CHECK(sv.min_neg < -1e-6);

  // minimal mixing already produces a positive direction
  auto sv12 = second_variation_circle(kPi, 1, 2);
  CHECK(sv12.n_pos >= 1);

  // a single static mean-zero x-mode gives a negative block
  auto sv10 = second_variation_circle(kPi, 1, 1);
  CHECK(sv10.n_pos == 0);
  CHECK(sv10.n_neg >= 2);
}

TEST_CASE("Nazarov inequality") {
  // extremal equality 1 + cos(2 pi k x)
  for (int k : {1, 3, 5}) {
    TrigPolynomial p = TrigPolynomial::zero(k);
    p.a[0] = 1.0;
    p.a[k] = 1.0;
    auto rep = nazarov_check(p);
    CHECK(rep.lhs == doctest::Approx(4.0 * k).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(4.0 * k).epsilon(1e-12));
    CHECK(rep.pass);
  }
  // constants
  TrigPolynomial one = TrigPolynomial::zero(1);
  one.a[0] = 1.0;
  auto rc = nazarov_check(one);
  CHECK(rc.lhs == doctest::Approx(0.0));
  CHECK(rc.pass);

  // random Fejer-Riesz polynomials pass, and the total-variation route
  // matches a direct fine quadrature of |p'|
  Rng rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 1 + rep % 6;
    std::vector<Complex> c(k + 1);
    for (int j = 0; j <= k; ++j) c[j] = Complex(rng.normal(), rng.normal());
    TrigPolynomial p = TrigPolynomial::fejer_riesz(c);
    auto r = nazarov_check(p);
    CHECK(r.pass);
    const double direct = simpson(
        [&](double x) { return std::abs(p.derivative_eval(x)); }, 0.0, 1.0,
        4096 * k);
    CHECK(r.lhs == doctest::Approx(direct).epsilon(1e-6));
  }
  // significantly negative input is rejected
  TrigPolynomial neg = TrigPolynomial::zero(1);
  neg.a[0] = -1.0;
  CHECK_THROWS_AS(nazarov_check(neg), DomainError);
}

TEST_CASE("quantum bound") {
  // constant Hamiltonian below the threshold
  const int k = 2;
  const double s = 0.5;
  const double c = 0.9 * s / (4.0 * k);
  auto path = CircleHamiltonianPath::from_trig(
      [c, k](double) {
        TrigPolynomial p = TrigPolynomial::zero(k);
        p.a[0] = c;
        return p;
      },
      k);
  auto rep = quantum_bound_check(path, s, k);
  CHECK(rep.hypothesis);
  CHECK(rep.length == doctest::Approx(c).epsilon(1e-9));
  CHECK(rep.pass);

  // random rescaled positive paths in P_k
  Rng rng(24);
  for (int trial = 0; trial < 5; ++trial) {
    TrigPolynomial base = random_positive_trig(k, rng, 0.3);
    auto mk = [&](double scale) {
      return CircleHamiltonianPath::from_trig(
          [base, scale](double t) {
            TrigPolynomial p = base;
            const double mod = 1.0 + 0.3 * std::sin(2.0 * kPi * t);
            for (int j = 0; j <= p.k; ++j) {
              p.a[j] *= scale * mod;
              p.b[j] *= scale * mod;
            }
            return p;
          },
          k);
    };
    double lo = 1e-4, hi = 1.0;
    while (quantum_bound_check(mk(hi), s, k).hypothesis) hi *= 2.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (quantum_bound_check(mk(mid), s, k).hypothesis)
        lo = mid;
      else
        hi = mid;
    }
    auto r = quantum_bound_check(mk(0.9 * lo), s, k);
    CHECK(r.hypothesis);
    CHECK(r.pass);
  }
}

TEST_CASE("jk embedding") {
  for (int k : {1, 4}) {
    Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
    TrigPolynomial p = jk_embed(0.7 * I2, k);
    for (double x : {0.0, 0.3, 0.71})
      CHECK(p.eval(x) == doctest::Approx(0.7 / (k * kPi)).epsilon(1e-14));
  }
  // V(H_k) * k pi = sqrt(det S), with the closed-form diagonal case
  Eigen::Matrix2d D;
  D << 2.0, 0.0, 0.0, 0.5;
  auto pd = jk_embed(D, 3);
  CHECK(metric_V([&](double x) { return pd.eval(x); }) * 3.0 * kPi ==
        doctest::Approx(1.0).epsilon(1e-10));

  Rng rng(25);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::Matrix2d S;
    const double a = rng.uniform(0.2, 3.0);
    const double cc = rng.uniform(0.2, 3.0);
    const double b = rng.uniform(-0.9, 0.9) * std::sqrt(a * cc);
    S << a, b, b, cc;
    const int k = 1 + rep % 6;
    TrigPolynomial p = jk_embed(S, k);
    CHECK(metric_V([&](double x) { return p.eval(x); }) * k * kPi ==
          doctest::Approx(std::sqrt(S.determinant())).epsilon(1e-8));
    // harmonic content: eval matches the quadratic form formula
    for (double x : {0.13, 0.57}) {
      Eigen::Vector2d z(std::cos(k * kPi * x), std::sin(k * kPi * x));
      CHECK(p.eval(x) ==
            doctest::Approx(z.dot(S * z) / (k * kPi)).epsilon(1e-13));
    }
  }
}

TEST_CASE("leonid plateau path: long and endpoint-bounded") {
  auto lp = long_circle_path(1, 0.1, 10.0);
  CHECK(lp.length >= 10.0);
  CHECK(lp.endpoint_cert);
  CHECK(lp.max_disp <= 1.0 + 0.1 + 1e-9);

  // length identity: every time slice has the same V as h itself
  const int fine = 1 << 16;
  auto slice_vinv = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < fine; ++i)
      s += 1.0 / lp.H.H(t, static_cast<double>(i) / fine);
    return s / fine;
  };
  const double v0 = 1.0 / slice_vinv(0.0);
  const double v1 = 1.0 / slice_vinv(0.37);
  CHECK(v0 == doctest::Approx(lp.length).epsilon(1e-3));
  CHECK(v1 == doctest::Approx(v0).epsilon(1e-9));

  auto lp2 = long_circle_path(2, 0.1, 50.0);
  CHECK(lp2.length >= 50.0);
  CHECK(lp2.max_disp <= 0.5 + 0.1 + 1e-9);
}

TEST_CASE("diff1 time function") {
  CircleLift id;
  id.phi.resize(64);
  for (int i = 0; i < 64; ++i) id.phi[i] = i / 64.0;
  CHECK(diff1_time_function(id) == doctest::Approx(0.0));
  CircleLift shift = id;
  for (auto& v : shift.phi) v += 0.25;
  CHECK(diff1_time_function(shift) == doctest::Approx(0.25));

  Rng rng(26);
  TrigPolynomial p = random_positive_trig(3, rng, 0.3);
  auto H = CircleHamiltonianPath::autonomous([&](double x) { return p.eval(x); });
  double prev = 0.0;
  for (double t : {0.2, 0.4, 0.6, 0.8}) {
    const double f = diff1_time_function(flow(H, t, 256, 512));
    CHECK(f > prev);
    prev = f;
  }
}
