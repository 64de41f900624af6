#include "lpsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpsieve {

namespace {

// Relative band in which a double comparison of squared lengths is not
// trusted and the decision is re-done exactly.
constexpr double kRelativeTolerance = 1e-12;

double dot_d(std::span<double const> a, std::span<double const> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ListReduction reduce(std::span<Scalar const> y, SieveList const& list,
                     Basis const& basis, bool trace) {
  std::size_t const n = basis.dim();
  IntVec const floors = basis.floor_coordinates(y);
  RatVec remainder(y.begin(), y.end());
  // remainder - y == basis * coeffs throughout.
  IntVec coeffs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer const& f = floors[i];
    if (sgn(f) == 0) continue;
    coeffs[i] = -f;
    Scalar const fq(f);
    for (std::size_t k = 0; k < n; ++k) remainder[k] -= fq * basis.column(i)[k];
  }

  ListReduction out{LatticeVector::zero(n), remainder, {}, {}};
  if (trace) out.sq_norms.push_back(squared_l2(remainder));

  std::vector<double> approx = to_double(remainder);
  double norm = dot_d(approx, approx);
  auto const entries = list.entries();
  for (;;) {
    std::size_t best = entries.size();
    int best_sign = 0;
    double best_value = norm * (1.0 + kRelativeTolerance);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      double const d = dot_d(approx, entries[i].approx);
      // ||r - s w||^2 = ||r||^2 - 2 s <r, w> + ||w||^2 for s = +-1.
      int const sign = d >= 0.0 ? 1 : -1;
      double const value = norm - 2.0 * std::fabs(d) + entries[i].sq_norm;
      if (value < best_value) {
        best_value = value;
        best = i;
        best_sign = sign;
      }
    }
    if (best == entries.size()) break;
    auto const& w = entries[best].vector;
    bool accept = best_value < norm * (1.0 - kRelativeTolerance);
    if (!accept) {
      Scalar const before = squared_l2(remainder);
      Scalar after = 0;
      for (std::size_t k = 0; k < n; ++k) {
        Scalar const x = best_sign > 0 ? Scalar(remainder[k] - w.coords()[k])
                                       : Scalar(remainder[k] + w.coords()[k]);
        after += x * x;
      }
      accept = after < before;
    }
    if (!accept) break;
    for (std::size_t k = 0; k < n; ++k) {
      if (best_sign > 0) {
        remainder[k] -= w.coords()[k];
        coeffs[k] -= w.coeffs()[k];
      } else {
        remainder[k] += w.coords()[k];
        coeffs[k] += w.coeffs()[k];
      }
    }
    approx = to_double(remainder);
    norm = dot_d(approx, approx);
    if (trace) out.sq_norms.push_back(squared_l2(remainder));
  }

  out.result = LatticeVector(basis, std::move(coeffs));
  out.final_remainder = std::move(remainder);
  return out;
}

}  // namespace

void SieveParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(xi >= 0.5)) throw std::invalid_argument("xi must be >= 1/2");
  if (!(c > 1.0)) throw std::invalid_argument("c must be > 1");
  if (sgn(mu) <= 0) throw std::invalid_argument("mu must be > 0");
  if (list_cap < 1) throw std::invalid_argument("list cap must be >= 1");
}

std::size_t kissing_bound(double epsilon, std::size_t n) {
  return static_cast<std::size_t>(
      std::ceil(std::exp2((0.401 + epsilon) * static_cast<double>(n))));
}

std::size_t default_list_samples(double epsilon, std::size_t n) {
  return 32 * kissing_bound(epsilon, n);
}

bool SieveList::contains(LatticeVector const& v) const {
  for (auto const& e : entries_) {
    if (e.vector.coeffs() == v.coeffs()) return true;
    bool negated = true;
    for (std::size_t i = 0; i < v.coeffs().size() && negated; ++i) {
      negated = e.vector.coeffs()[i] == -v.coeffs()[i];
    }
    if (negated) return true;
  }
  return false;
}

bool SieveList::append(LatticeVector v) {
  if (v.is_zero() || contains(v)) return false;
  auto approx = to_double(v.coords());
  double const sq = dot_d(approx, approx);
  entries_.push_back(Entry{std::move(v), std::move(approx), sq});
  return true;
}

RatVec mod_lattice(std::span<Scalar const> y, Basis const& basis) {
  IntVec const floors = basis.floor_coordinates(y);
  RatVec r(y.begin(), y.end());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    Integer const& f = floors[i];
    if (sgn(f) == 0) continue;
    Scalar const fq(f);
    for (std::size_t k = 0; k < basis.dim(); ++k) r[k] -= fq * basis.column(i)[k];
  }
  return r;
}

RatVec sample_ball(double radius, std::size_t n, Rng& rng) {
  if (!(radius > 0.0) || n == 0) {
    throw std::invalid_argument("sample_ball needs radius > 0 and n >= 1");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Scalar const bound = from_double(radius) * from_double(radius);
  double const sure = radius * radius * (1.0 - 1e-9);
  std::vector<double> g(n);
  for (;;) {
    for (auto& x : g) x = gauss(rng);
    double const len = std::sqrt(dot_d(g, g));
    if (len == 0.0) continue;
    double const shrink =
        std::pow(uniform(rng), 1.0 / static_cast<double>(n)) / len;
    RatVec y(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double const v = radius * (g[i] * shrink);
      y[i] = from_double(v);
      sq += v * v;
    }
    if (sq <= sure || squared_l2(y) <= bound) return y;
  }
}

ListReduction list_reduce_traced(std::span<Scalar const> y,
                                 SieveList const& list, Basis const& basis) {
  return reduce(y, list, basis, true);
}

LatticeVector list_reduce(std::span<Scalar const> y, SieveList const& list,
                          Basis const& basis) {
  return reduce(y, list, basis, false).result;
}

SieveList build_list(Basis const& basis, SieveParams const& params, Rng& rng) {
  params.validate();
  std::size_t const n = basis.dim();
  std::size_t const samples = params.list_samples != 0
                                  ? params.list_samples
                                  : default_list_samples(params.epsilon, n);
  double const radius = params.radius();
  double const threshold_sq = params.threshold() * params.threshold();
  SieveList list;
  for (std::size_t i = 0; i < samples; ++i) {
    RatVec const y = sample_ball(radius, n, rng);
    LatticeVector t = list_reduce(y, list, basis);
    if (t.is_zero()) continue;
    if (squared_l2(t.coords()).get_d() < threshold_sq) continue;
    if (list.contains(t)) continue;
    if (list.size() == params.list_cap) {
      throw ListCapExceeded("sieve list exceeded its cap of " +
                            std::to_string(params.list_cap) + " vectors");
    }
    list.append(std::move(t));
  }
  return list;
}

SieveRun run_sieve(Basis const& basis, SieveParams const& params,
                   std::size_t count, Rng& rng) {
  SieveRun run{build_list(basis, params, rng), {}};
  run.candidates.reserve(count);
  double const radius = params.radius();
  for (std::size_t i = 0; i < count; ++i) {
    RatVec const y = sample_ball(radius, basis.dim(), rng);
    run.candidates.push_back(list_reduce(y, run.list, basis));
  }
  return run;
}

std::vector<LatticeVector> sieve_candidates(Basis const& basis,
                                            SieveParams const& params,
                                            std::size_t count, Rng& rng) {
  return run_sieve(basis, params, count, rng).candidates;
}

}  // namespace lpsieve
