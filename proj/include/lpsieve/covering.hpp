#pragma once

// Covering-number estimates for Euclidean balls by boxes and cross-polytopes.
//
// All exponents are base-2 rates per dimension and all entropies are in
// bits.  For a box half-width a, phi = phi(a) in (0, 1) is the unique root of
//   (1 - phi^2) / phi^3 = 2 a^2 / pi,
// and the number of translates of a B_inf^n needed to cover sqrt(n) B_2^n is
// at most poly(n) * 2^{n * covering_exponent_linf(a)}.

#include <cstddef>
#include <span>
#include <vector>

#include "lpsieve/core.hpp"

namespace lpsieve {

double binary_entropy(double phi);

// Root of (1 - phi^2) / phi^3 = 2 a^2 / pi, residual below 1e-12 relative.
double solve_phi(double a);

struct CoveringBound {
  double a;
  double phi;
  double exponent;
};

// Rate of vol(a B_inf^n + sqrt(n) B_2^n):
//   H(phi) + (1 - phi) log2(2a) + (phi / 2) log2(2 pi e / phi).
double ball_cube_exponent(double a);

// H(phi) + (phi / 2) log2(2 pi e / phi).  Decreasing for a above ~1.3 and
// tending to 0 as a grows.
double covering_exponent_linf(double a);
CoveringBound covering_bound_linf(double a);

// Smallest a (relative tolerance 1e-6) with covering_exponent_linf(a) <= eps.
// Requires 0 < eps < log2(2 pi e) / 2, the limit of the exponent as a -> 0.
double solve_a_eps_linf(double eps);

struct L1Exponent {
  double value;
  double phi;  // maximizer
};

// max over phi in [0, 1] of 2 H(phi) + (phi / 2) log2(2e / (pi c^2)), the
// rate of vol(B_1^n + (c / sqrt(n)) B_2^n) / vol((c / sqrt(n)) B_2^n).
L1Exponent covering_exponent_l1_detail(double c);
double covering_exponent_l1(double c);

// Smallest c (relative tolerance 1e-6) with covering_exponent_l1(c) <= eps.
double solve_a_eps_l1(double eps);

// Intrinsic volumes V_0 .. V_n of the cross-polytope B_1^n, 1 <= n <= 30.
// Throws QuadratureFailure if an integral misses relative accuracy 1e-8.
std::vector<double> intrinsic_volumes_B1(int n);

// vol(K + t B_2^n) = sum_j V_j(K) vol(B_2^{n-j}) t^{n-j}.
double steiner_volume(std::span<double const> intrinsic, double t, int n);

// pi^{k/2} / Gamma(k/2 + 1).
double unit_ball_volume(int k);

// A cover of the grid points (1/n) Z^n inside sqrt(n) B_2^n by cubes
// centered on the same grid.
struct GridCover {
  int n = 0;
  double a = 0.0;
  Scalar grid_step;
  // Cubes cover grid points within this many steps in every coordinate.
  long half_width_steps = 0;
  // Half-width a + 1/n: with it the cubes cover the continuous ball.
  double covering_half_width = 0.0;
  std::size_t ground_set_size = 0;
  // Integer grid coordinates; the center is grid_step * centers[i].
  std::vector<std::vector<long>> centers;

  RatVec center(std::size_t i) const;
};

inline constexpr std::size_t kMaxGroundSet = 1'000'000;

// Integer points k with |k|^2 <= n^3, i.e. (1/n) Z^n inside sqrt(n) B_2^n.
std::vector<std::vector<long>> grid_ground_set(int n);

// Greedy set cover, ties to the lexicographically smallest center.
// Throws GroundSetTooLarge when the ground set exceeds kMaxGroundSet.
GridCover greedy_grid_cover(int n, double a);

// Point-by-point check that every ground-set point lies in some cube.
bool covers_ground_set(GridCover const& cover);

}  // namespace lpsieve
