#include "lpsieve/cvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "best.hpp"
#include "lpsieve/covering.hpp"
#include "lpsieve/reduce.hpp"

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

Scalar ratio_for(std::size_t n) {
  return Scalar(static_cast<long>(n + 1), static_cast<long>(n));
}

std::vector<Scalar> geometric(Scalar const& lower, double upper, std::size_t n) {
  Scalar const ratio = ratio_for(n);
  std::vector<Scalar> grid{lower};
  while (grid.back().get_d() < upper * (1.0 + 1e-12)) {
    grid.push_back(Scalar(grid.back() * ratio));
  }
  return grid;
}

void check_target(Basis const& basis, std::span<Scalar const> t) {
  if (t.size() != basis.dim()) {
    throw std::invalid_argument("target has dimension " + std::to_string(t.size()) +
                                ", lattice has " + std::to_string(basis.dim()));
  }
}

void fill_common(SolveReport& report, SolverConfig const& cfg) {
  SieveParams const defaults = cfg.sieve_params(Scalar(1), cfg.seed);
  report.seed = cfg.seed;
  report.retries = cfg.retries;
  report.xi = defaults.xi;
  report.c = defaults.c;
}

// Exact closest point on a line, or the lattice point equal to t.
void finish_degenerate(SolveReport& report, LatticeVector v, std::span<Scalar const> t,
                       NormKind const& p) {
  RatVec const offset = subtract(t, v.coords());
  report.best = std::move(v);
  report.achieved = lp_norm(offset, p);
  report.achieved_exact = exact_norm_value(offset, p);
  report.mu_used = 0;
  report.degenerate = true;
  report.history.assign(report.retries, report.achieved);
}

bool leads_negative(std::span<Integer const> key) {
  for (auto const& x : key) {
    if (x != 0) return x < 0;
  }
  return false;
}

// Per-target result of the cover search.
struct CoverHit {
  IntVec coeffs;  // reduced basis
  RatVec offset;  // t - v
  double value;
};

template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn const& fn) {
  unsigned const workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto const& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shared loop of the cover reduction.  `guesses` ascend; the first guess at
// which the best vector so far lies within c (a + 1) g of t is accepted.
SolveReport cover_search(Basis const& input, LllResult const& red,
                         std::span<Scalar const> t, NormKind const& p,
                         SolverConfig const& cfg,
                         std::vector<Scalar> const& guesses, bool skip_zero,
                         SolveReport report) {
  std::size_t const n = input.dim();
  double const a = cfg.a.value_or(solve_a_eps_l1(cfg.epsilon));
  report.a_eps = a;
  report.guarantee = report.c * (a + 1.0);
  report.grid_size = guesses.size();
  report.cover_targets_formula = cover_target_formula(cfg.epsilon, n);
  std::size_t const targets = capped(report.cover_targets_formula, cfg.target_cap);
  report.targets_cap_bound = targets < report.cover_targets_formula;

  SolverConfig inner = cfg;
  inner.retries = cfg.inner_retries;
  inner.jobs = 1;
  NormKind const two(2);
  {
    SieveParams const d = cfg.sieve_params(Scalar(1), cfg.seed);
    report.n_samples_formula = cvp_sample_formula(cfg.epsilon, d.c, n);
    report.n_samples = capped(report.n_samples_formula, cfg.sample_cap);
    report.samples_cap_bound = report.n_samples < report.n_samples_formula;
  }

  detail::Best<Scalar> best(p);
  for (std::size_t gi = 0; gi < guesses.size(); ++gi) {
    double const g = guesses[gi].get_d();
    std::uint64_t const guess_seed = derive_seed(cfg.seed, gi);
    std::vector<std::optional<CoverHit>> hits(targets);
    std::vector<std::size_t> list_hits(targets, 0);
    parallel_for(targets, cfg.jobs, [&](std::size_t m) {
      Rng rng = make_rng(guess_seed, 2 * m);
      CoverSample sample = sample_cover_target(t, p, a, g, rng, cfg.rejection_cap);
      SolverConfig local = inner;
      local.seed = derive_seed(guess_seed, 2 * m + 1);
      CvpQuery q2{red.basis, std::move(sample.point), two, local};
      SolveReport r2;
      try {
        r2 = approx_cvp_high(q2);
      } catch (SolverFailed const&) {
        return;
      }
      list_hits[m] = r2.list_cap_hits;
      if (skip_zero && r2.best.is_zero()) return;
      RatVec offset = subtract(t, r2.best.coords());
      double const value = lp_norm(offset, p);
      hits[m] = CoverHit{r2.best.coeffs(), std::move(offset), value};
    });
    report.cover_targets += targets;
    for (std::size_t m = 0; m < targets; ++m) {
      report.list_cap_hits += list_hits[m];
      if (!hits[m]) continue;
      IntVec key = to_input_coeffs(red.transform, hits[m]->coeffs);
      RatVec& offset = hits[m]->offset;
      if (skip_zero && leads_negative(key)) {
        for (auto& x : key) x = -x;
        for (auto& x : offset) x = -x;
      }
      best.offer(hits[m]->value, offset, key, guesses[gi]);
    }
    report.history.push_back(best.empty() ? std::numeric_limits<double>::infinity()
                                          : best.value());
    double const bound = report.guarantee * g;
    if (!best.empty() && best.value() <= bound) {
      report.best = LatticeVector(input, best.key());
      report.achieved = best.value();
      report.achieved_exact = exact_norm_value(best.offset(), p);
      report.mu_used = best.payload();
      report.accepted_guess = guesses[gi];
      report.acceptance_bound = bound;
      return report;
    }
  }
  throw SolverFailed("no distance guess produced a vector inside the acceptance envelope");
}

}  // namespace

EmbeddedBasis kannan_embed(Basis const& basis, std::span<Scalar const> t,
                           Scalar const& mu) {
  check_target(basis, t);
  if (sgn(mu) <= 0) throw std::invalid_argument("mu must be > 0");
  std::size_t const n = basis.dim();
  Scalar const corner = mu / Scalar(static_cast<long>(n));
  std::vector<RatVec> columns;
  columns.reserve(n + 1);
  for (auto const& b : basis.columns()) {
    RatVec col(b);
    col.emplace_back(0);
    columns.push_back(std::move(col));
  }
  RatVec last(t.begin(), t.end());
  last.push_back(corner);
  columns.push_back(std::move(last));
  return EmbeddedBasis{Basis(std::move(columns)), corner};
}

DistanceGrid distance_grid(Basis const& basis, std::span<Scalar const> t,
                           NormKind const& p, Scalar const& delta) {
  check_target(basis, t);
  std::size_t const n = basis.dim();
  DistanceGrid grid;
  if (auto coeffs = basis.membership(t)) {
    grid.exact_hit = LatticeVector(basis, std::move(*coeffs));
    return grid;
  }
  LatticeVector const babai = nearest_plane(basis, t);
  RatVec const offset = subtract(t, babai.coords());
  // ||offset||_inf / (2 alpha^{ceil(n/2)}) <= ||offset||_2 / (2 alpha^{n/2}).
  Scalar const alpha = Scalar(1) / (delta - Scalar(1, 4));
  Scalar scale = 2;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) scale *= alpha;
  Scalar top = 0;
  for (auto const& x : offset) top = std::max(top, Scalar(abs(x)));
  grid.lower = top / scale;
  double upper = lp_norm(offset, p);
  if (p.half_minus_inverse() > 0.0) {
    upper *= std::pow(static_cast<double>(n), p.half_minus_inverse());
  }
  grid.guesses = geometric(grid.lower, upper, n);
  grid.upper = grid.guesses.back();
  return grid;
}

double cvp_sample_formula(double epsilon, double c, std::size_t n) {
  double const dn = static_cast<double>(n);
  return std::ceil((2.0 * c * (dn + 1.0) + 2.0) * std::exp2((epsilon + 0.401) * dn));
}

double cover_target_formula(double epsilon, std::size_t n) {
  double const dn = static_cast<double>(n);
  return std::ceil(dn * dn * std::exp2(epsilon * dn));
}

SolveReport approx_cvp_high(CvpQuery const& q) {
  RatVec target = q.target;
  canonicalize(target);
  if (!q.p.at_least_two()) throw std::invalid_argument("approx_cvp_high needs p >= 2");
  check_target(q.basis, target);
  SolverConfig const& cfg = q.config;
  if (cfg.retries < 1) throw std::invalid_argument("retries must be >= 1");
  std::size_t const n = q.basis.dim();

  SolveReport report;
  fill_common(report, cfg);
  double const a = q.p.is_two() ? 1.0 : solve_a_eps_linf(0.401);
  if (!q.p.is_two()) report.a_eps = a;
  report.guarantee = q.p.is_two()
                         ? report.c
                         : 2.0 * a * report.c * (1.0 + 1.0 / static_cast<double>(n)) + 1.0;

  if (n == 1) {
    finish_degenerate(report, nearest_plane(q.basis, target), target, q.p);
    return report;
  }
  LllResult const red = lll_reduce_with_transform(q.basis, cfg.lll);
  DistanceGrid const grid = distance_grid(red.basis, target, q.p, cfg.lll.delta);
  if (grid.exact_hit) {
    finish_degenerate(report,
                      LatticeVector(q.basis, to_input_coeffs(red.transform, grid.exact_hit->coeffs())),
                      target, q.p);
    return report;
  }
  // Sieve on t - babai so runs on t and t + u (u in the lattice) coincide.
  LatticeVector const shift = nearest_plane(red.basis, target);
  RatVec const local = subtract(target, shift.coords());
  report.grid_size = grid.guesses.size();
  report.n_samples_formula = cvp_sample_formula(cfg.epsilon, report.c, n);
  report.n_samples = capped(report.n_samples_formula, cfg.sample_cap);
  report.samples_cap_bound = report.n_samples < report.n_samples_formula;

  detail::Best<Found> best(q.p);
  std::vector<double> offset_d(n);
  for (unsigned r = 0; r < cfg.retries; ++r) {
    std::uint64_t const retry_seed = derive_seed(cfg.seed, r);
    for (std::size_t g = 0; g < grid.guesses.size(); ++g) {
      Scalar const& mu = grid.guesses[g];
      EmbeddedBasis const emb = kannan_embed(red.basis, local, mu);
      LllResult const emb_red = lll_reduce_with_transform(emb.base, cfg.lll);
      SieveParams const params = cfg.sieve_params(mu, retry_seed);
      Rng rng = make_rng(retry_seed, g);
      SieveRun run;
      try {
        run = run_sieve(emb_red.basis, params, report.n_samples, rng);
      } catch (ListCapExceeded const&) {
        ++report.list_cap_hits;
        continue;
      }
      report.max_list_size = std::max(report.max_list_size, run.list.size());

      auto const& cands = run.candidates;
      std::size_t const m = cands.size();
      std::vector<IntVec> original(m);
      std::vector<std::vector<double>> approx(m);
      std::vector<double> size(m);
      for (std::size_t i = 0; i < m; ++i) {
        original[i] = to_input_coeffs(emb_red.transform, cands[i].coeffs());
        approx[i] = to_double(cands[i].coords());
        size[i] = lp_norm(approx[i], q.p);
      }
      // x holds embedded coefficients with x[n] = +-1.
      auto consider = [&](IntVec x, RatVec coords) {
        if (x[n] < 0) {
          for (auto& v : x) v = -v;
          for (auto& v : coords) v = -v;
        }
        if (coords[n] != emb.mu_over_n) {
          throw std::logic_error("embedded difference has the wrong last coordinate");
        }
        coords.pop_back();  // t - v
        IntVec reduced(n);
        for (std::size_t i = 0; i < n; ++i) reduced[i] = shift.coeffs()[i] - x[i];
        IntVec const key = to_input_coeffs(red.transform, reduced);
        best.offer(lp_norm(coords, q.p), coords, key, Found{mu, r});
      };
      for (std::size_t i = 0; i < m; ++i) {
        if (abs(original[i][n]) != 1) continue;
        for (std::size_t k = 0; k < n; ++k) offset_d[k] = approx[i][k];
        if (!best.worth(lp_norm(offset_d, q.p))) continue;
        consider(original[i], cands[i].coords());
      }
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          Integer const k_diff = original[i][n] - original[j][n];
          if (abs(k_diff) != 1) continue;
          for (std::size_t k = 0; k < n; ++k) offset_d[k] = approx[i][k] - approx[j][k];
          double const slack = 1e-12 * (size[i] + size[j]);
          if (!best.worth(lp_norm(offset_d, q.p), slack)) continue;
          IntVec x(n + 1);
          for (std::size_t k = 0; k <= n; ++k) x[k] = original[i][k] - original[j][k];
          consider(std::move(x), subtract(cands[i].coords(), cands[j].coords()));
        }
      }
    }
    report.history.push_back(best.empty() ? std::numeric_limits<double>::infinity()
                                          : best.value());
  }
  if (best.empty()) {
    throw SolverFailed("no embedded difference with last coordinate +-mu/n was found");
  }
  report.best = LatticeVector(q.basis, best.key());
  if (subtract(target, report.best.coords()) != best.offset()) {
    throw std::logic_error("recovered vector does not match its offset");
  }
  report.achieved = best.value();
  report.achieved_exact = exact_norm_value(best.offset(), q.p);
  report.mu_used = best.payload().mu;
  report.retry_index = best.payload().retry;
  return report;
}

std::vector<double> project_to_lp_ball(std::span<double const> x,
                                       NormKind const& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (p.is_infinite() || p.exponent() > 2) {
    throw std::invalid_argument("projection supports 1 <= p <= 2");
  }
  std::vector<double> out(x.begin(), x.end());
  if (lp_norm(x, p) <= r) return out;
  std::size_t const n = x.size();

  if (p.is_two()) {
    double const s = r / lp_norm(x, p);
    for (auto& v : out) v *= s;
    return out;
  }

  if (p.is_one()) {
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::fabs(x[i]);
    std::sort(u.begin(), u.end(), std::greater<>());
    double sum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += u[k];
      double const t = (sum - r) / static_cast<double>(k + 1);
      if (u[k] - t > 0.0) theta = t;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double const m = std::max(std::fabs(x[i]) - theta, 0.0);
      out[i] = std::copysign(m, x[i]);
    }
    return out;
  }

  // Minimize sum (u_i - y_i)^2 subject to sum u_i^p = 1 with y = |x| / r:
  // u_i + lambda p u_i^{p-1} = y_i, and sum u_i(lambda)^p decreases in lambda.
  double const pe = p.value();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fabs(x[i]) / r;
  std::vector<double> u(n);
  auto solve = [&](double lambda) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = 0.0;
      double hi = y[i];
      for (int it = 0; it < 80 && hi - lo > 1e-15 * y[i]; ++it) {
        double const mid = 0.5 * (lo + hi);
        if (mid + lambda * pe * std::pow(mid, pe - 1.0) < y[i]) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      u[i] = lo;
      total += std::pow(lo, pe);
    }
    return total;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (solve(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double const mid = 0.5 * (lo + hi);
    if (solve(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  solve(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::copysign(u[i] * r, x[i]);
  return out;
}

double cover_radius(double a, NormKind const& p, std::size_t n) {
  return a * std::pow(static_cast<double>(n), p.half_minus_inverse());
}

CoverSample sample_cover_target(std::span<Scalar const> t, NormKind const& p,
                                double a, double scale, Rng& rng,
                                std::size_t max_attempts) {
  if (!(a >= 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("cover sampler needs a >= 0 and scale > 0");
  }
  std::size_t const n = t.size();
  double const r = cover_radius(a, p, n);
  double const half = scale * (1.0 + r);
  std::uniform_real_distribution<double> uniform(-half, half);
  std::vector<double> z(n);
  std::vector<double> w(n);
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = uniform(rng);
      w[i] = z[i] / scale;
    }
    std::vector<double> const proj = project_to_lp_ball(w, p, 1.0);
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) dist += (w[i] - proj[i]) * (w[i] - proj[i]);
    if (std::sqrt(dist) > r) continue;
    CoverSample out{RatVec(n), attempt};
    for (std::size_t i = 0; i < n; ++i) out.point[i] = t[i] + from_double(z[i]);
    return out;
  }
  throw RejectionBudgetExceeded("no cover target accepted after " +
                                std::to_string(max_attempts) + " proposals");
}

SolveReport approx_cvp_low(CvpQuery const& q) {
  RatVec target = q.target;
  canonicalize(target);
  if (q.p.at_least_two()) throw std::invalid_argument("approx_cvp_low needs p < 2");
  check_target(q.basis, target);
  SolverConfig const& cfg = q.config;
  SolveReport report;
  fill_common(report, cfg);
  if (q.basis.dim() == 1) {
    finish_degenerate(report, nearest_plane(q.basis, target), target, q.p);
    return report;
  }
  LllResult const red = lll_reduce_with_transform(q.basis, cfg.lll);
  DistanceGrid const grid = distance_grid(red.basis, target, q.p, cfg.lll.delta);
  if (grid.exact_hit) {
    finish_degenerate(report,
                      LatticeVector(q.basis, to_input_coeffs(red.transform, grid.exact_hit->coeffs())),
                      target, q.p);
    return report;
  }
  return cover_search(q.basis, red, target, q.p, cfg, grid.guesses, false,
                      std::move(report));
}

SolveReport approx_svp_low(SvpQuery const& q) {
  if (q.p.at_least_two()) throw std::invalid_argument("approx_svp_low needs p < 2");
  SolverConfig const& cfg = q.config;
  std::size_t const n = q.basis.dim();
  SolveReport report;
  fill_common(report, cfg);
  RatVec const zero(n);
  if (n == 1) {
    report.best = LatticeVector(q.basis, IntVec{Integer(1)});
    report.achieved = lp_norm(report.best.coords(), q.p);
    report.achieved_exact = exact_norm_value(report.best.coords(), q.p);
    report.mu_used = 0;
    report.degenerate = true;
    return report;
  }
  LllResult const red = lll_reduce_with_transform(q.basis, cfg.lll);
  Scalar const lower = min_gs_inf_norm(red.basis);
  double upper = std::numeric_limits<double>::infinity();
  for (auto const& b : red.basis.columns()) upper = std::min(upper, lp_norm(b, q.p));
  std::vector<Scalar> const guesses = geometric(lower, upper, n);
  return cover_search(q.basis, red, zero, q.p, cfg, guesses, true, std::move(report));
}

SolveReport solve_cvp(CvpQuery const& query) {
  if (query.p.at_least_two()) return approx_cvp_high(query);
  return approx_cvp_low(query);
}

}  // namespace lpsieve
