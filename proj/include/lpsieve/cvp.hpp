#pragma once

// Approximate CVP_p.
//
// p >= 2: Kannan embedding of (B, t) with bottom-right entry mu / n, list
// sieve on the embedded lattice, and recovery from the best difference whose
// last coordinate is +-mu / n.
//
// 1 <= p < 2: targets are drawn uniformly from t + g (B_p + r B_2) for each
// distance guess g, each target goes through CVP_2, and the closest answer
// is accepted once it lies within c (a + 1) g of t.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lpsieve/core.hpp"
#include "lpsieve/rng.hpp"
#include "lpsieve/svp.hpp"

namespace lpsieve {

struct CvpQuery {
  Basis basis;
  RatVec target;
  NormKind p;
  SolverConfig config;
};

struct EmbeddedBasis {
  // Columns (b_i, 0) followed by (t, mu / n).
  Basis base;
  Scalar mu_over_n;
};

EmbeddedBasis kannan_embed(Basis const& basis, std::span<Scalar const> t,
                           Scalar const& mu);

struct DistanceGrid {
  // Set when t is a lattice vector; the grid is then empty.
  std::optional<LatticeVector> exact_hit;
  Scalar lower;
  Scalar upper;
  std::vector<Scalar> guesses;
};

// Geometric grid with ratio (n + 1) / n bracketing dist_p(t, L).  The lower
// end is ||t - babai||_inf / (2 alpha^{ceil(n/2)}) with alpha = 1 / (delta - 1/4),
// the upper end ||t - babai||_p, times n^{1/2 - 1/p} for p > 2.  B should be
// LLL-reduced with the same delta.
DistanceGrid distance_grid(Basis const& basis, std::span<Scalar const> t,
                           NormKind const& p, Scalar const& delta = Scalar(3, 4));

// N = ceil((2 c (n + 1) + 2) 2^{(eps + 0.401) n}).
double cvp_sample_formula(double epsilon, double c, std::size_t n);
// M = ceil(n^2 2^{eps n}).
double cover_target_formula(double epsilon, std::size_t n);

// Requires p >= 2.  Throws SolverFailed if no usable difference appears.
SolveReport approx_cvp_high(CvpQuery const& query);

// Euclidean projection of x onto r B_p, 1 <= p <= 2, accurate to 1e-9.
std::vector<double> project_to_lp_ball(std::span<double const> x,
                                       NormKind const& p, double r);

// Radius of the Euclidean summand at unit scale, a n^{1/2 - 1/p}
// (a / sqrt(n) for p = 1).
double cover_radius(double a, NormKind const& p, std::size_t n);

struct CoverSample {
  RatVec point;
  std::size_t attempts = 0;
};

// Uniform on t + scale (B_p + cover_radius(a) B_2) by rejection from the box
// of half-width scale (1 + cover_radius(a)).  Throws
// RejectionBudgetExceeded after max_attempts proposals.
CoverSample sample_cover_target(std::span<Scalar const> t, NormKind const& p,
                                double a, double scale, Rng& rng,
                                std::size_t max_attempts = std::size_t{1} << 20);

// Require 1 <= p < 2.  Throw SolverFailed when no guess is accepted.
SolveReport approx_cvp_low(CvpQuery const& query);
SolveReport approx_svp_low(SvpQuery const& query);

// Routes to approx_cvp_high or approx_cvp_low.
SolveReport solve_cvp(CvpQuery const& query);

}  // namespace lpsieve
