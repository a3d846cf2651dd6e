#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorfin {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when an argument is outside the mathematical domain of an operation
// (e.g. a matrix outside the closed cone, a nonpositive Hamiltonian).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an eigenvalue cluster or invariant subspace is too ill
// conditioned to assign a numerical rank or signature.
struct NumericalRankError : std::runtime_error {
  explicit NumericalRankError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a grid/refinement budget is exhausted before reaching the
// requested resolution.
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a requested endpoint cannot be reached by a causal curve or a
// trajectory violates a causality constraint.
struct CausalityError : std::runtime_error {
  explicit CausalityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Standard complex structure on R^{2n} in interleaved coordinates
// (x_1, y_1, ..., x_n, y_n): block diagonal with 2x2 blocks [[0,-1],[1,0]].
// Convention: omega0(u, v) = (J0 u) . v.
inline Mat standard_J(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0)
    throw DomainError("standard_J: dimension must be a positive even integer");
  Mat J = Mat::Zero(two_n, two_n);
  for (int j = 0; j < two_n / 2; ++j) {
    J(2 * j, 2 * j + 1) = -1.0;
    J(2 * j + 1, 2 * j) = 1.0;
  }
  return J;
}

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic PRNG: a single 64-bit seed expanded by splitmix64.
// All distributions are hand-rolled from the raw bit stream so that a given
// seed reproduces the same draws on every platform. Draw order matters and is
// documented at the call sites that build test corpora.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Derive an independent stream (used by sweeps to seed each cell).
  Rng split(uint64_t stream) const {
    uint64_t s = state_;
    uint64_t a = splitmix64(s);
    return Rng(a ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  // Standard normal via Box-Muller on the deterministic uniform stream.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// Composite Simpson rule on [a, b] with n subintervals (n made even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Nodes and weights of the 10-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre10 {
  static const std::array<double, 5>& nodes() {
    static const std::array<double, 5> x = {
        0.1488743389816312108848260, 0.4333953941292471907992659,
        0.6794095682990244062343274, 0.8650633666889845107320967,
        0.9739065285171717200779640};
    return x;
  }
  static const std::array<double, 5>& weights() {
    static const std::array<double, 5> w = {
        0.2955242247147528701738930, 0.2692667193099963550912269,
        0.2190863625159820439955349, 0.1494513491505805931457763,
        0.0666713443086881375935688};
    return w;
  }
};

// Composite 10-point Gauss-Legendre quadrature with `panels` panels.
template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const auto& xs = GaussLegendre10::nodes();
  const auto& ws = GaussLegendre10::weights();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    double s = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
      s += ws[i] * (f(c + 0.5 * h * xs[i]) + f(c - 0.5 * h * xs[i]));
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace lorfin
