#include "lorfin/convex.hpp"

#include <algorithm>
#include <cmath>

namespace lorfin {

namespace {

// Vertical extent of the disk over abscissa x.
double chord(double R, double x) {
  const double d = R * R - x * x;
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

// Area of [x0,x1] x [y0,y1] intersected with the disk of radius R; the strip
// integrand is smooth between the abscissas where the chord meets the cell
// edges, so the integral is split there.
double cell_disk_overlap(double R, double x0, double x1, double y0,
                         double y1) {
  const double r2 = R * R;
  auto corner_in = [&](double x, double y) { return x * x + y * y <= r2; };
  const bool all_in = corner_in(x0, y0) && corner_in(x0, y1) &&
                      corner_in(x1, y0) && corner_in(x1, y1);
  if (all_in) return (x1 - x0) * (y1 - y0);
  const double nearest_x = std::max({x0, -x1, 0.0});
  const double nearest_y = std::max({y0, -y1, 0.0});
  if (nearest_x * nearest_x + nearest_y * nearest_y >= r2) return 0.0;
  auto strip = [&](double x) {
    const double g = chord(R, x);
    return std::max(0.0, std::min(y1, g) - std::max(y0, -g));
  };
  std::vector<double> cuts = {x0, x1};
  for (double y : {y0, y1, 0.0}) {
    const double d = r2 - y * y;
    if (d > 0.0) {
      const double b = std::sqrt(d);
      for (double c : {-b, b})
        if (c > x0 && c < x1) cuts.push_back(c);
    }
  }
  for (double c : {-R, R})
    if (c > x0 && c < x1) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += gauss_legendre(strip, cuts[i], cuts[i + 1], 8);
  return acc;
}

}  // namespace

GridDomain GridDomain::disk(double R, double h) {
  if (R <= 0.0 || h <= 0.0 || h > R)
    throw DomainError("GridDomain: invalid radius or spacing");
  GridDomain d;
  d.R = R;
  d.h = h;
  const int half = static_cast<int>(std::ceil(R / h)) + 2;
  d.G = 2 * half + 1;
  d.x0 = -half * h;
  d.weight = Mat::Zero(d.G, d.G);
  for (int i = 0; i < d.G; ++i) {
    const double x = d.coord(i);
    for (int j = 0; j < d.G; ++j) {
      const double y = d.coord(j);
      d.weight(i, j) = cell_disk_overlap(R, x - 0.5 * h, x + 0.5 * h,
                                         y - 0.5 * h, y + 0.5 * h);
    }
  }
  d.weight_sum = d.weight.sum();
  return d;
}

ConvexHamiltonianGrid ConvexHamiltonianGrid::sample(const GridDomain& dom,
                                                    const PlaneField& H) {
  ConvexHamiltonianGrid g;
  g.dom = &dom;
  const int G = dom.G;
  g.values.resize(G, G);
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) g.values(i, j) = H(dom.coord(i), dom.coord(j));
  g.hxx = Mat::Zero(G, G);
  g.hyy = Mat::Zero(G, G);
  g.hxy = Mat::Zero(G, G);
  const double h2 = dom.h * dom.h;
  g.min_hess_eig = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < G; ++i) {
    for (int j = 1; j + 1 < G; ++j) {
      if (dom.weight(i, j) <= 0.0) continue;
      const double hxx =
          (g.values(i + 1, j) - 2.0 * g.values(i, j) + g.values(i - 1, j)) / h2;
      const double hyy =
          (g.values(i, j + 1) - 2.0 * g.values(i, j) + g.values(i, j - 1)) / h2;
      const double hxy = (g.values(i + 1, j + 1) - g.values(i + 1, j - 1) -
                          g.values(i - 1, j + 1) + g.values(i - 1, j - 1)) /
                         (4.0 * h2);
      g.hxx(i, j) = hxx;
      g.hyy(i, j) = hyy;
      g.hxy(i, j) = hxy;
      const double mean = 0.5 * (hxx + hyy);
      const double rad = std::hypot(0.5 * (hxx - hyy), hxy);
      g.min_hess_eig = std::min(g.min_hess_eig, mean - rad);
    }
  }
  g.uniformly_convex = g.min_hess_eig > 0.0;
  return g;
}

namespace {

double weighted_integral(const ConvexHamiltonianGrid& g,
                         const std::function<double(double det)>& f) {
  const GridDomain& dom = *g.dom;
  double acc = 0.0;
  for (int i = 1; i + 1 < dom.G; ++i) {
    for (int j = 1; j + 1 < dom.G; ++j) {
      const double w = dom.weight(i, j);
      if (w <= 0.0) continue;
      const double det =
          g.hxx(i, j) * g.hyy(i, j) - g.hxy(i, j) * g.hxy(i, j);
      acc += w * f(det);
    }
  }
  return acc;
}

}  // namespace

double functional_G(const ConvexHamiltonianGrid& grid) {
  if (!grid.uniformly_convex)
    throw DomainError("functional_G: Hamiltonian is not uniformly convex");
  const double s = weighted_integral(
      grid, [](double det) { return std::sqrt(std::max(det, 0.0)); });
  return s / grid.dom->weight_sum;
}

double integral_det_hess(const ConvexHamiltonianGrid& grid) {
  if (!grid.uniformly_convex)
    throw DomainError("integral_det_hess: Hamiltonian is not uniformly convex");
  return weighted_integral(grid, [](double det) { return det; });
}

double length_calG_path(const GridDomain& dom, const PlaneFieldPath& H,
                        int t_slices) {
  auto slice = [&](double t) {
    auto g = ConvexHamiltonianGrid::sample(
        dom, [&](double x, double y) { return H(t, x, y); });
    return functional_G(g);
  };
  return simpson(slice, 0.0, 1.0, t_slices);
}

double functional_V_of_boundary(const GridDomain& dom, const PlaneFieldPath& H,
                                int t_slices) {
  auto slice = [&](double t) {
    auto g = ConvexHamiltonianGrid::sample(
        dom, [&](double x, double y) { return H(t, x, y); });
    return std::sqrt(std::max(integral_det_hess(g), 0.0));
  };
  return simpson(slice, 0.0, 1.0, t_slices) / std::sqrt(dom.weight_sum);
}

VarthmReport varthm_check(const GridDomain& dom, const PlaneFieldPath& H,
                          int t_slices) {
  VarthmReport rep;
  rep.ma_tol = 10.0 * dom.h * dom.h;
  rep.equality_flag = true;
  // spatial variance of det Hess at the Simpson nodes decides equality
  for (int s = 0; s <= t_slices; ++s) {
    const double t = static_cast<double>(s) / t_slices;
    auto g = ConvexHamiltonianGrid::sample(
        dom, [&](double x, double y) { return H(t, x, y); });
    double wsum = 0.0, mean = 0.0, mean2 = 0.0;
    for (int i = 1; i + 1 < dom.G; ++i) {
      for (int j = 1; j + 1 < dom.G; ++j) {
        const double w = dom.weight(i, j);
        if (w <= 0.0) continue;
        const double det =
            g.hxx(i, j) * g.hyy(i, j) - g.hxy(i, j) * g.hxy(i, j);
        wsum += w;
        mean += w * det;
        mean2 += w * det * det;
      }
    }
    mean /= wsum;
    mean2 /= wsum;
    const double rel_std =
        std::sqrt(std::max(mean2 - mean * mean, 0.0)) / std::max(mean, 1e-300);
    if (rel_std > rep.ma_tol) rep.equality_flag = false;
  }
  rep.length = length_calG_path(dom, H, t_slices);
  rep.V = functional_V_of_boundary(dom, H, t_slices);
  rep.gap = rep.V - rep.length;
  return rep;
}

namespace {

struct PointDerivs {
  double gx, gy;      // gradient
  double xx, yy, xy;  // Hessian
};

PointDerivs fd_derivs(const PlaneFieldPath& H, double t, double x, double y,
                      double h) {
  PointDerivs d;
  const double fpp = H(t, x + h, y + h), fpm = H(t, x + h, y - h);
  const double fmp = H(t, x - h, y + h), fmm = H(t, x - h, y - h);
  const double fp0 = H(t, x + h, y), fm0 = H(t, x - h, y);
  const double f0p = H(t, x, y + h), f0m = H(t, x, y - h);
  const double f00 = H(t, x, y);
  d.gx = (fp0 - fm0) / (2.0 * h);
  d.gy = (f0p - f0m) / (2.0 * h);
  d.xx = (fp0 - 2.0 * f00 + fm0) / (h * h);
  d.yy = (f0p - 2.0 * f00 + f0m) / (h * h);
  d.xy = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
  return d;
}

// exp of a traceless 2x2 matrix in closed form
Mat expm2_traceless(const Mat& A) {
  const double d = A.determinant();
  Mat I = Mat::Identity(2, 2);
  if (d > 1e-300) {
    const double w = std::sqrt(d);
    return std::cos(w) * I + (std::sin(w) / w) * A;
  }
  if (d < -1e-300) {
    const double w = std::sqrt(-d);
    return std::cosh(w) * I + (std::sinh(w) / w) * A;
  }
  return I + A;
}

}  // namespace

SampledSymplecticPath linearized_flow(const GridDomain& dom,
                                      const PlaneFieldPath& H, double zx,
                                      double zy, int steps,
                                      double boundary_tol, int keep_every) {
  const double h = dom.h;
  const Mat J = standard_J(2);
  const double dt = 1.0 / steps;
  double x = zx, y = zy;
  Mat W = Mat::Identity(2, 2);
  SampledSymplecticPath path;
  path.n = 1;
  auto push = [&](double t, const Mat& Wk, const Mat& S) {
    path.t.push_back(t);
    path.W.push_back(Wk);
    path.S.push_back(S);
  };
  {
    auto d0 = fd_derivs(H, 0.0, x, y, h);
    Mat S0(2, 2);
    S0 << d0.xx, d0.xy, d0.xy, d0.yy;
    push(0.0, W, S0);
  }
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    // RK4 for the trajectory z' = J0 grad H
    auto vel = [&](double tt, double xx_, double yy_) {
      auto d = fd_derivs(H, tt, xx_, yy_, h);
      return std::make_pair(-d.gy, d.gx);  // J0 (gx, gy)
    };
    auto [k1x, k1y] = vel(t, x, y);
    auto [k2x, k2y] = vel(t + 0.5 * dt, x + 0.5 * dt * k1x, y + 0.5 * dt * k1y);
    auto [k3x, k3y] = vel(t + 0.5 * dt, x + 0.5 * dt * k2x, y + 0.5 * dt * k2y);
    auto [k4x, k4y] = vel(t + dt, x + dt * k3x, y + dt * k3y);
    const double mx = x + 0.5 * dt * k2x;  // midpoint state for the Hessian
    const double my = y + 0.5 * dt * k2y;
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    if (std::hypot(x, y) > dom.R + boundary_tol + 1e-3)
      throw DomainError("linearized_flow: trajectory left the domain");
    auto dm = fd_derivs(H, t + 0.5 * dt, mx, my, h);
    Mat Sm(2, 2);
    Sm << dm.xx, dm.xy, dm.xy, dm.yy;
    W = expm2_traceless(dt * (J * Sm)) * W;
    if ((s + 1) % keep_every == 0 || s + 1 == steps) {
      auto dn = fd_derivs(H, t + dt, x, y, h);
      Mat Sn(2, 2);
      Sn << dn.xx, dn.xy, dn.xy, dn.yy;
      push(t + dt, W, Sn);
    }
  }
  return path;
}

static FiberwiseReport fiberwiseReport_impl(const GridDomain& dom,
                                     const PlaneFieldPath& H, int samples,
                                     Rng& rng, int steps, double boundary_tol,
                                     bool with_rhs) {
  FiberwiseReport rep;
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    // uniform draw from the disk by rejection (x then y per attempt)
    double zx, zy;
    do {
      zx = rng.uniform(-dom.R, dom.R);
      zy = rng.uniform(-dom.R, dom.R);
    } while (zx * zx + zy * zy > dom.R * dom.R);
    auto path = linearized_flow(dom, H, zx, zy, steps, boundary_tol,
                                std::max(1, steps / 128));
    acc += length_G(path);
  }
  rep.lhs_average = acc / samples;
  rep.rhs = with_rhs ? length_calG_path(dom, H) : 0.0;
  rep.diff = rep.lhs_average - rep.rhs;
  return rep;
}

FiberwiseReport fiberwise_length_identity(const GridDomain& dom,
                                          const PlaneFieldPath& H, int samples,
                                          Rng& rng, int steps,
                                          double boundary_tol) {
  return fiberwiseReport_impl(dom, H, samples, rng, steps, boundary_tol, true);
}

RuelleReport ruelle_maslov_average(const GridDomain& dom,
                                   const PlaneFieldPath& H, int samples,
                                   Rng& rng, int steps, double spec_tol,
                                   double tol) {
  RuelleReport rep;
  rep.min_dist_minus1 = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    double zx, zy;
    do {
      zx = rng.uniform(-dom.R, dom.R);
      zy = rng.uniform(-dom.R, dom.R);
    } while (zx * zx + zy * zy > dom.R * dom.R);
    auto path = linearized_flow(dom, H, zx, zy, steps, 1e-6, 1);
    for (const auto& W : path.W) {
      Eigen::ComplexEigenSolver<CMat> es(W.cast<Complex>());
      for (int i = 0; i < 2; ++i)
        rep.min_dist_minus1 = std::min(
            rep.min_dist_minus1, std::abs(es.eigenvalues()(i) + Complex(1, 0)));
    }
    acc += maslov_lift(path).mu.back();
  }
  rep.M = acc / samples;
  rep.length = length_calG_path(dom, H);
  rep.hypothesis = rep.min_dist_minus1 > spec_tol;
  rep.bound_pass = !rep.hypothesis || rep.length <= 2.0 * kPi * rep.M + tol;
  return rep;
}

}  // namespace lorfin
