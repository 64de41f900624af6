#pragma once

// Independent reference computations for tests.  Nothing here calls into
// the library's norm, reduction or enumeration code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <optional>
#include <random>
#include <vector>

#include "lpsieve/core.hpp"
#include "lpsieve/reduce.hpp"

namespace testing_support {

using lpsieve::Basis;
using lpsieve::Integer;
using lpsieve::IntVec;
using lpsieve::RatVec;
using lpsieve::Scalar;

inline std::vector<RatVec> random_columns(std::mt19937_64& gen, std::size_t n,
                                          int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<RatVec> cols(n, RatVec(n));
  for (auto& c : cols) {
    for (auto& x : c) x = d(gen);
  }
  return cols;
}

// Fraction-free Gaussian elimination (Bareiss) on the integer matrix
// obtained by clearing denominators column by column.
inline Scalar bareiss_det(std::vector<RatVec> const& cols) {
  std::size_t const n = cols.size();
  Scalar scale = 1;
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (std::size_t c = 0; c < n; ++c) {
    Integer l = 1;
    for (auto const& x : cols[c]) l = lcm(l, Integer(x.get_den()));
    scale /= Scalar(l);
    for (std::size_t r = 0; r < n; ++r) {
      Scalar const v = cols[c][r] * Scalar(l);
      m[r][c] = v.get_num();
    }
  }
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return Scalar(m[n - 1][n - 1] * sign) * scale;
}

inline std::vector<RatVec> random_full_rank(std::mt19937_64& gen, std::size_t n,
                                            int lo, int hi) {
  for (;;) {
    auto cols = random_columns(gen, n, lo, hi);
    if (bareiss_det(cols) != 0) return cols;
  }
}

inline Basis random_reduced(std::mt19937_64& gen, std::size_t n, int lo = -9,
                            int hi = 9) {
  return lpsieve::lll_reduce(Basis(random_full_rank(gen, n, lo, hi)));
}

inline RatVec mat_vec(std::vector<RatVec> const& cols, std::vector<long> const& x) {
  RatVec out(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < cols.size(); ++i) out[i] += cols[j][i] * x[j];
  }
  return out;
}

// Exact value for p in {1, inf} and squared for p = 2; long double otherwise.
struct RefNorm {
  enum Kind { kOne, kTwoSquared, kInf, kGeneral } kind;
  double p = 0.0;

  Scalar exact(RatVec const& v) const {
    Scalar s = 0;
    for (auto const& x : v) {
      Scalar const a = abs(x);
      if (kind == kOne) s += a;
      if (kind == kTwoSquared) s += a * a;
      if (kind == kInf && a > s) s = a;
    }
    return s;
  }
  long double approx(RatVec const& v) const {
    long double s = 0;
    for (auto const& x : v) s += std::pow(std::fabs(static_cast<long double>(x.get_d())), p);
    return std::pow(s, 1.0L / p);
  }
  // Plain value of the norm (square root taken for p = 2).
  double value(RatVec const& v) const {
    if (kind == kGeneral) return static_cast<double>(approx(v));
    double const e = exact(v).get_d();
    return kind == kTwoSquared ? std::sqrt(e) : e;
  }
};

inline RefNorm ref_norm_for(lpsieve::NormKind const& p) {
  if (p.is_infinite()) return {RefNorm::kInf};
  if (p.is_one()) return {RefNorm::kOne};
  if (p.is_two()) return {RefNorm::kTwoSquared};
  return {RefNorm::kGeneral, p.value()};
}

// Minimum of ||t - B x|| over the coefficient box |x_i| <= bound, skipping
// x = 0 when `nonzero`.  Returns the value (see RefNorm::value).
inline double box_scan(std::vector<RatVec> const& cols, RatVec const& t,
                       lpsieve::NormKind const& p, long bound, bool nonzero) {
  RefNorm const norm = ref_norm_for(p);
  std::size_t const n = cols.size();
  std::vector<long> x(n, -bound);
  double best = HUGE_VAL;
  for (;;) {
    bool zero = std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
    if (!(nonzero && zero)) {
      RatVec v = mat_vec(cols, x);
      for (std::size_t i = 0; i < n; ++i) v[i] = t[i] - v[i];
      best = std::min(best, norm.value(v));
    }
    std::size_t k = 0;
    while (k < n && x[k] == bound) x[k++] = -bound;
    if (k == n) break;
    ++x[k];
  }
  return best;
}

inline RatVec random_target(std::mt19937_64& gen, std::size_t n, int range = 5,
                            int den = 7) {
  std::uniform_int_distribution<int> d(-range * den, range * den);
  RatVec t(n);
  for (auto& x : t) {
    x = Scalar(d(gen), den);
    x.canonicalize();
  }
  return t;
}

// Plain bisection on (1 - phi^2) - rhs * phi^3, decreasing in phi.
inline double bisect_phi(double a) {
  double const rhs = 2 * a * a / std::numbers::pi;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double const mid = (lo + hi) / 2;
    (1 - mid * mid - rhs * mid * mid * mid > 0 ? lo : hi) = mid;
  }
  return lo;
}

// Euclidean distance from x to B_1^3, by projection onto the l1 ball.
inline double distance_to_cross_polytope(std::array<double, 3> x) {
  double l1 = 0;
  for (double v : x) l1 += std::fabs(v);
  if (l1 <= 1) return 0.0;
  std::array<double, 3> u{std::fabs(x[0]), std::fabs(x[1]), std::fabs(x[2])};
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0;
  double theta = 0;
  for (int j = 0; j < 3; ++j) {
    cum += u[j];
    double const cand = (cum - 1) / (j + 1);
    if (u[j] > cand) theta = cand;
  }
  double d2 = 0;
  for (double v : x) {
    double const proj = std::copysign(std::max(std::fabs(v) - theta, 0.0), v);
    d2 += (v - proj) * (v - proj);
  }
  return std::sqrt(d2);
}

// Minimum number of cubes of half-width h (in grid steps) centered at
// integer points that cover `ground`, by iterative deepening.
inline std::size_t exact_cover_size(std::vector<std::vector<long>> const& ground, long h) {
  std::set<std::vector<long>> cand_set;
  for (auto const& g : ground) {
    for (long dx = -h; dx <= h; ++dx) {
      for (long dy = -h; dy <= h; ++dy) cand_set.insert({g[0] + dx, g[1] + dy});
    }
  }
  std::vector<std::vector<long>> const cand(cand_set.begin(), cand_set.end());
  auto covers = [&](std::vector<long> const& c, std::vector<long> const& g) {
    return std::labs(c[0] - g[0]) <= h && std::labs(c[1] - g[1]) <= h;
  };
  std::function<bool(std::vector<bool>&, std::size_t)> search =
      [&](std::vector<bool>& done, std::size_t budget) -> bool {
    std::size_t first = 0;
    while (first < ground.size() && done[first]) ++first;
    if (first == ground.size()) return true;
    if (budget == 0) return false;
    for (auto const& c : cand) {
      if (!covers(c, ground[first])) continue;
      std::vector<bool> next = done;
      for (std::size_t i = 0; i < ground.size(); ++i) {
        if (covers(c, ground[i])) next[i] = true;
      }
      if (search(next, budget - 1)) return true;
    }
    return false;
  };
  for (std::size_t k = 1;; ++k) {
    std::vector<bool> done(ground.size(), false);
    if (search(done, k)) return k;
  }
}

}  // namespace testing_support
