#pragma once

// Approximate SVP_p for p >= 2: for each length guess mu on a geometric grid
// run the list sieve and keep the shortest pairwise difference of harvested
// vectors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lpsieve/core.hpp"
#include "lpsieve/reduce.hpp"
#include "lpsieve/sieve.hpp"

namespace lpsieve {

struct SieveOverrides {
  std::optional<double> xi;
  std::optional<double> c;
  std::optional<double> insert_threshold_factor;  // times mu
  std::optional<std::size_t> list_samples;
};

// Knobs shared by every solver.
struct SolverConfig {
  double epsilon = 0.1;
  unsigned retries = 8;
  std::uint64_t seed = 0;
  std::size_t sample_cap = std::size_t{1} << 16;
  std::size_t list_cap = std::size_t{1} << 16;
  // Cover targets per distance guess (p < 2).
  std::size_t target_cap = std::size_t{1} << 12;
  std::size_t rejection_cap = std::size_t{1} << 20;
  // Retries of each inner CVP_2 call (p < 2).
  unsigned inner_retries = 1;
  // Overrides the covering radius a (p < 2).
  std::optional<double> a;
  unsigned jobs = 1;
  LllParams lll;
  SieveOverrides sieve;

  SieveParams sieve_params(Scalar const& mu, std::uint64_t seed) const;
};

struct SvpQuery {
  Basis basis;
  NormKind p;
  SolverConfig config;
};

struct SolveReport {
  // Coefficients are relative to the query basis.
  LatticeVector best = LatticeVector::zero(0);
  // ||best||_p for SVP, ||t - best||_p for CVP.
  double achieved = 0.0;
  // Exact for p in {1, inf}, squared for p = 2.
  std::optional<Scalar> achieved_exact;
  Scalar mu_used;
  std::size_t grid_size = 0;
  std::size_t n_samples = 0;
  double n_samples_formula = 0.0;
  bool samples_cap_bound = false;
  std::size_t list_cap_hits = 0;
  std::size_t max_list_size = 0;
  std::uint64_t seed = 0;
  unsigned retry_index = 0;
  unsigned retries = 0;
  // Best value after each retry.
  std::vector<double> history;
  double xi = 0.0;
  double c = 0.0;
  // Approximation factor the analysis promises; informational only.
  double guarantee = 0.0;
  std::optional<double> a_eps;
  // Cover reduction (p < 2).
  std::optional<Scalar> accepted_guess;
  std::optional<double> acceptance_bound;
  std::size_t cover_targets = 0;
  double cover_targets_formula = 0.0;
  bool targets_cap_bound = false;
  bool degenerate = false;
};

// min_i ||b*_i||_inf, an exact lower bound on lambda_1 in l2 and every
// lp with p <= 2, homogeneous in B.
Scalar min_gs_inf_norm(Basis const& basis);

// Geometric grid with ratio (n + 1) / n from min_gs_inf_norm(B) to at least
// n^{max(0, 1/2 - 1/p)} ||b_1||_2.  B should be LLL-reduced.
std::vector<Scalar> mu_grid(Basis const& basis, NormKind const& p);
std::vector<Scalar> mu_grid(Basis const& basis);

// Shortest nonzero vector among all v_i - v_j (i < j) and all nonzero v_i,
// signed so that its first nonzero coefficient is positive.  Ties go to the
// lexicographically smallest coefficient vector.  Throws
// AllZero when there is none.
LatticeVector pairwise_min_diff(std::span<LatticeVector const> candidates,
                                NormKind const& p);

// N = 2 ceil(2^{(eps + 0.401) n} + 1).
double svp_sample_formula(double epsilon, std::size_t n);

// Requires p >= 2.  Throws SolverFailed if no run produced a nonzero vector.
SolveReport approx_svp(SvpQuery const& query);

// Routes to approx_svp or approx_svp_low.
SolveReport solve_svp(SvpQuery const& query);

}  // namespace lpsieve
