#include "lpsieve/svp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "best.hpp"
#include "lpsieve/covering.hpp"
#include "lpsieve/cvp.hpp"

namespace lpsieve {

namespace {

struct Found {
  Scalar mu;
  unsigned retry;
};

std::size_t capped(double formula, std::size_t cap) {
  if (!(formula < static_cast<double>(cap))) return cap;
  return static_cast<std::size_t>(formula);
}

// True if the first nonzero entry is negative.
bool leads_negative(std::span<Integer const> key) {
  for (auto const& x : key) {
    if (x != 0) return x < 0;
  }
  return false;
}

}  // namespace

SieveParams SolverConfig::sieve_params(Scalar const& mu,
                                       std::uint64_t run_seed) const {
  SieveParams params;
  params.epsilon = epsilon;
  params.mu = mu;
  params.list_cap = list_cap;
  params.seed = run_seed;
  if (sieve.xi) params.xi = *sieve.xi;
  if (sieve.c) params.c = *sieve.c;
  if (sieve.insert_threshold_factor) {
    params.insert_threshold = *sieve.insert_threshold_factor * mu.get_d();
  }
  if (sieve.list_samples) params.list_samples = *sieve.list_samples;
  params.validate();
  return params;
}

Scalar min_gs_inf_norm(Basis const& basis) {
  auto const gs = gram_schmidt(basis);
  std::optional<Scalar> best;
  for (auto const& v : gs.orthogonal) {
    Scalar m = 0;
    for (auto const& x : v) m = std::max(m, Scalar(abs(x)));
    if (!best || m < *best) best = m;
  }
  return *best;
}

std::vector<Scalar> mu_grid(Basis const& basis, NormKind const& p) {
  std::size_t const n = basis.dim();
  double const stretch =
      std::pow(static_cast<double>(n), std::max(0.0, p.half_minus_inverse()));
  double const upper = std::sqrt(squared_l2(basis.column(0)).get_d()) * stretch;
  Scalar const ratio(static_cast<long>(n + 1), static_cast<long>(n));
  std::vector<Scalar> grid{min_gs_inf_norm(basis)};
  while (grid.back().get_d() < upper * (1.0 + 1e-12)) {
    grid.push_back(Scalar(grid.back() * ratio));
  }
  return grid;
}

std::vector<Scalar> mu_grid(Basis const& basis) {
  return mu_grid(basis, NormKind(2));
}

LatticeVector pairwise_min_diff(std::span<LatticeVector const> candidates,
                                NormKind const& p) {
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  std::size_t const m = candidates.size();
  std::vector<std::vector<double>> approx(m);
  std::vector<double> size(m);
  for (std::size_t i = 0; i < m; ++i) {
    approx[i] = to_double(candidates[i].coords());
    size[i] = lp_norm(approx[i], p);
  }
  detail::Best<LatticeVector> best(p);
  auto consider = [&](LatticeVector v) {
    if (leads_negative(v.coeffs())) v = -v;
    best.offer(lp_norm(v.coords(), p), v.coords(), v.coeffs(), v);
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (!candidates[i].is_zero()) consider(candidates[i]);
  }
  std::vector<double> diff(approx.empty() ? 0 : approx[0].size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (candidates[i].coeffs() == candidates[j].coeffs()) continue;
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = approx[i][k] - approx[j][k];
      double const slack = 1e-12 * (size[i] + size[j]);
      if (!best.worth(lp_norm(diff, p), slack)) continue;
      consider(candidates[i] - candidates[j]);
    }
  }
  if (best.empty()) throw AllZero("every candidate and difference is zero");
  return best.payload();
}

double svp_sample_formula(double epsilon, std::size_t n) {
  return 2.0 * std::ceil(std::exp2((epsilon + 0.401) * static_cast<double>(n)) + 1.0);
}

SolveReport approx_svp(SvpQuery const& q) {
  if (!q.p.at_least_two()) throw std::invalid_argument("approx_svp needs p >= 2");
  SolverConfig const& cfg = q.config;
  if (cfg.retries < 1) throw std::invalid_argument("retries must be >= 1");
  std::size_t const n = q.basis.dim();
  SieveParams const defaults = cfg.sieve_params(Scalar(1), cfg.seed);

  SolveReport report;
  report.seed = cfg.seed;
  report.retries = cfg.retries;
  report.xi = defaults.xi;
  report.c = defaults.c;
  if (q.p.is_two()) {
    report.guarantee = defaults.c;
  } else {
    report.a_eps = solve_a_eps_linf(0.401);
    report.guarantee = 2.0 * defaults.c * *report.a_eps;
  }

  if (n == 1) {
    report.best = LatticeVector(q.basis, IntVec{Integer(1)});
    report.achieved = lp_norm(report.best.coords(), q.p);
    report.achieved_exact = exact_norm_value(report.best.coords(), q.p);
    report.mu_used = sqrt_upper(squared_l2(report.best.coords()));
    report.degenerate = true;
    report.history.assign(cfg.retries, report.achieved);
    return report;
  }

  LllResult const red = lll_reduce_with_transform(q.basis, cfg.lll);
  std::vector<Scalar> const grid = mu_grid(red.basis, q.p);
  report.grid_size = grid.size();
  report.n_samples_formula = svp_sample_formula(cfg.epsilon, n);
  report.n_samples = capped(report.n_samples_formula, cfg.sample_cap);
  report.samples_cap_bound = report.n_samples < report.n_samples_formula;

  detail::Best<Found> best(q.p);
  for (unsigned r = 0; r < cfg.retries; ++r) {
    std::uint64_t const retry_seed = derive_seed(cfg.seed, r);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      SieveParams const params = cfg.sieve_params(grid[g], retry_seed);
      Rng rng = make_rng(retry_seed, g);
      SieveRun run;
      try {
        run = run_sieve(red.basis, params, report.n_samples, rng);
      } catch (ListCapExceeded const&) {
        ++report.list_cap_hits;
        continue;
      }
      report.max_list_size = std::max(report.max_list_size, run.list.size());
      std::optional<LatticeVector> v;
      try {
        v = pairwise_min_diff(run.candidates, q.p);
      } catch (AllZero const&) {
        continue;
      }
      IntVec key = to_input_coeffs(red.transform, v->coeffs());
      if (leads_negative(key)) {
        v = -*v;
        for (auto& x : key) x = -x;
      }
      best.offer(lp_norm(v->coords(), q.p), v->coords(), key, Found{grid[g], r});
    }
    if (!best.empty()) {
      report.history.push_back(best.value());
    } else {
      report.history.push_back(std::numeric_limits<double>::infinity());
    }
  }
  if (best.empty()) throw SolverFailed("no nonzero vector found in any retry");

  report.best = LatticeVector(q.basis, best.key());
  report.achieved = best.value();
  report.achieved_exact = exact_norm_value(report.best.coords(), q.p);
  report.mu_used = best.payload().mu;
  report.retry_index = best.payload().retry;
  return report;
}

SolveReport solve_svp(SvpQuery const& query) {
  if (query.p.at_least_two()) return approx_svp(query);
  return approx_svp_low(query);
}

}  // namespace lpsieve
