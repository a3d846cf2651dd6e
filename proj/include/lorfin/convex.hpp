#pragma once

#include "lorfin/paths.hpp"

#include <functional>

namespace lorfin {

// Scalar field on the plane, smooth near the closed disk.
using PlaneField = std::function<double(double x, double y)>;
// Time-dependent Hamiltonian on [0,1] x disk.
using PlaneFieldPath = std::function<double(double t, double x, double y)>;

// Uniform Cartesian grid resolving the disk of radius R, with exact
// cell/disk overlap weights for the node-centered cells.
struct GridDomain {
  double R = 1.0;
  double h = 1.0 / 64.0;
  int G = 0;             // nodes per axis
  double x0 = 0.0;       // coordinate of node index 0
  Mat weight;            // overlap area of each node cell with the disk

  static GridDomain disk(double R, double h);
  double coord(int i) const { return x0 + i * h; }
  double volume() const { return kPi * R * R; }
  double weight_sum = 0.0;  // quadrature measure of the disk
};

// Sampled Hamiltonian with second-order central-difference Hessians.
struct ConvexHamiltonianGrid {
  const GridDomain* dom = nullptr;
  Mat values;
  Mat hxx, hyy, hxy;       // on nodes with positive overlap weight
  double min_hess_eig = 0.0;
  bool uniformly_convex = false;

  static ConvexHamiltonianGrid sample(const GridDomain& dom, const PlaneField& H);
};

/// G(H) = (1/vol) int_Omega sqrt(det Hess H): midpoint rule with overlap weights.
double functional_G(const ConvexHamiltonianGrid& grid);

/// int_Omega det Hess H (the volume of the gradient image for convex H).
double integral_det_hess(const ConvexHamiltonianGrid& grid);

/// length of a path of Hamiltonians: int_0^1 G(H_t) dt.
double length_calG_path(const GridDomain& dom, const PlaneFieldPath& H,
                        int t_slices = 32);

/// V(psi) = vol^{-1/2n} int_0^1 vol(grad H_t(Omega))^{1/2n} dt.
double functional_V_of_boundary(const GridDomain& dom, const PlaneFieldPath& H,
                                int t_slices = 32);

struct VarthmReport {
  double length;
  double V;
  double gap;
  bool equality_flag;  // det Hess H_t constant in z within the noise floor
  double ma_tol;       // the noise floor 10 h^2 actually used
};
// Monge-Ampere extremality check: length <= V always, equality iff the
// Hessian determinant is spatially constant at every time.
VarthmReport varthm_check(const GridDomain& dom, const PlaneFieldPath& H,
                          int t_slices = 32);

struct FiberwiseReport {
  double lhs_average;  // mean over samples of length_G of the linearized path
  double rhs;          // length_calG of the Hamiltonian path
  double diff;
};
// Identity between the averaged linearized length and the G-length of the
// path, by Monte-Carlo over seeded uniform samples of the disk.
FiberwiseReport fiberwise_length_identity(const GridDomain& dom,
                                          const PlaneFieldPath& H, int samples,
                                          Rng& rng, int steps = 512,
                                          double boundary_tol = 1e-6);

struct RuelleReport {
  double M;                // averaged Maslov quasimorphism of d phi
  double length;           // length_calG of the path
  double min_dist_minus1;  // min distance of linearized spectra to -1
  bool hypothesis;         // min_dist_minus1 > spec_tol
  bool bound_pass;         // length <= 2 pi M + tol (asserted when hypothesis)
};
RuelleReport ruelle_maslov_average(const GridDomain& dom,
                                   const PlaneFieldPath& H, int samples,
                                   Rng& rng, int steps = 512,
                                   double spec_tol = 5e-2, double tol = 1e-9);

// Linearized flow along one trajectory: returns the sampled matrix path of
// d phi^t(z0) (midpoint-exponential, exactly group-valued).
SampledSymplecticPath linearized_flow(const GridDomain& dom,
                                      const PlaneFieldPath& H, double zx,
                                      double zy, int steps = 512,
                                      double boundary_tol = 1e-6,
                                      int keep_every = 4);

}  // namespace lorfin
