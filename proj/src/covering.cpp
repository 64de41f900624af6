#include "lpsieve/covering.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace lpsieve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Maximizer of a concave function on [lo, hi].
template <typename F>
double golden_section_max(F const& f, double lo, double hi) {
  double const inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// Smallest x (relative tolerance) in [lo, inf) with f(x) <= eps for a
// non-increasing f with f(lo) > eps.
template <typename F>
double bisect_threshold(F const& f, double eps, double lo) {
  double hi = std::max(2.0 * lo, 1.0);
  while (f(hi) > eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::domain_error("threshold search diverged");
  }
  while (hi / lo - 1.0 > 1e-7) {
    double const mid = std::sqrt(lo * hi);
    if (f(mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double linf_exponent_of_phi(double phi) {
  return binary_entropy(phi) + 0.5 * phi * std::log2(2.0 * kPi * kE / phi);
}

double a_of_phi(double phi) {
  return std::sqrt(kPi * (1.0 - phi * phi) / (2.0 * phi * phi * phi));
}

}  // namespace

double binary_entropy(double phi) {
  if (phi <= 0.0 || phi >= 1.0) return 0.0;
  return -phi * std::log2(phi) - (1.0 - phi) * std::log2(1.0 - phi);
}

double solve_phi(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("solve_phi needs a > 0");
  long double const rhs = 2.0L * a * a / static_cast<long double>(kPi);
  // (1 - phi^2) / phi^3 decreases strictly from +inf to 0 on (0, 1).
  long double lo = 0.0L;
  long double hi = 1.0L;
  for (int i = 0; i < 200; ++i) {
    long double const mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    long double const g = (1.0L - mid * mid) / (mid * mid * mid);
    if (g > rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

double ball_cube_exponent(double a) {
  double const phi = solve_phi(a);
  return binary_entropy(phi) + (1.0 - phi) * std::log2(2.0 * a) +
         0.5 * phi * std::log2(2.0 * kPi * kE / phi);
}

double covering_exponent_linf(double a) {
  return linf_exponent_of_phi(solve_phi(a));
}

CoveringBound covering_bound_linf(double a) {
  double const phi = solve_phi(a);
  return CoveringBound{a, phi, linf_exponent_of_phi(phi)};
}

double solve_a_eps_linf(double eps) {
  double const limit = 0.5 * std::log2(2.0 * kPi * kE);
  if (!(eps > 0.0) || !(eps < limit)) {
    throw std::invalid_argument("solve_a_eps_linf needs 0 < eps < " +
                                std::to_string(limit));
  }
  // The exponent rises for small a and falls after its peak; only the
  // falling branch can reach eps.
  double const phi_peak = golden_section_max(linf_exponent_of_phi, 1e-9, 1.0 - 1e-9);
  double const a_peak = a_of_phi(phi_peak);
  return bisect_threshold(covering_exponent_linf, eps, a_peak);
}

L1Exponent covering_exponent_l1_detail(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("covering_exponent_l1 needs c > 0");
  double const slope = 0.5 * std::log2(2.0 * kE / (kPi * c * c));
  auto const f = [slope](double phi) {
    return 2.0 * binary_entropy(phi) + phi * slope;
  };
  double const phi = golden_section_max(f, 0.0, 1.0);
  return L1Exponent{std::max(f(phi), 0.0), phi};
}

double covering_exponent_l1(double c) {
  return covering_exponent_l1_detail(c).value;
}

double solve_a_eps_l1(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve_a_eps_l1 needs eps > 0");
  double lo = 1e-3;
  while (covering_exponent_l1(lo) <= eps) lo *= 0.5;
  return bisect_threshold(covering_exponent_l1, eps, lo);
}

double unit_ball_volume(int k) {
  if (k < 0) throw std::invalid_argument("unit_ball_volume needs k >= 0");
  double const half = 0.5 * k;
  return std::pow(kPi, half) / std::tgamma(half + 1.0);
}

std::vector<double> intrinsic_volumes_B1(int n) {
  if (n < 1 || n > 30) {
    throw std::invalid_argument("intrinsic_volumes_B1 supports 1 <= n <= 30");
  }
  using boost::math::quadrature::gauss_kronrod;
  // e^{-x^2} < 1e-16 beyond this point.
  double const x_max = std::sqrt(16.0 * std::log(10.0));
  double const sqrt_pi = std::sqrt(kPi);
  std::vector<double> v(n + 1);
  v[n] = std::pow(2.0, n) / std::tgamma(n + 1.0);
  for (int j = 0; j < n; ++j) {
    int const power = n - j - 1;
    double const scale = std::sqrt(static_cast<double>(j + 1));
    auto const integrand = [&](double x) {
      double const inner = 0.5 * sqrt_pi * std::erf(x / scale);
      return std::exp(-x * x) * std::pow(inner, power);
    };
    double error = 0.0;
    double const integral = gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, x_max, 20, 1e-13, &error);
    if (!(error <= 1e-8 * std::fabs(integral))) {
      throw QuadratureFailure("intrinsic volume V_" + std::to_string(j) +
                              " missed its accuracy target");
    }
    double const binom = std::tgamma(n + 1.0) /
                         (std::tgamma(j + 2.0) * std::tgamma(n - j + 0.0));
    double const prefactor = std::pow(2.0, n) * binom * scale /
                             (std::tgamma(j + 1.0) * std::pow(sqrt_pi, n - j));
    v[j] = prefactor * integral;
  }
  return v;
}

double steiner_volume(std::span<double const> intrinsic, double t, int n) {
  if (static_cast<int>(intrinsic.size()) != n + 1) {
    throw std::invalid_argument("steiner_volume needs n + 1 intrinsic volumes");
  }
  if (t < 0.0) throw std::invalid_argument("steiner_volume needs t >= 0");
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    sum += intrinsic[j] * unit_ball_volume(n - j) * std::pow(t, n - j);
  }
  return sum;
}

RatVec GridCover::center(std::size_t i) const {
  RatVec out(centers[i].size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = grid_step * centers[i][k];
  return out;
}

std::vector<std::vector<long>> grid_ground_set(int n) {
  if (n < 1) throw std::invalid_argument("grid cover needs n >= 1");
  long const n3 = static_cast<long>(n) * n * n;
  long radius = 0;
  while ((radius + 1) * (radius + 1) <= n3) ++radius;
  double const estimate = std::pow(2.0 * radius + 1.0, n);
  if (estimate > 50.0 * kMaxGroundSet) {
    throw GroundSetTooLarge("grid ground set too large for n = " +
                            std::to_string(n));
  }
  std::vector<std::vector<long>> points;
  std::vector<long> k(n, -radius);
  for (;;) {
    long sq = 0;
    for (long x : k) sq += x * x;
    if (sq <= n3) {
      points.push_back(k);
      if (points.size() > kMaxGroundSet) {
        throw GroundSetTooLarge("grid ground set exceeds " +
                                std::to_string(kMaxGroundSet) + " points");
      }
    }
    int d = n - 1;
    while (d >= 0 && k[d] == radius) k[d--] = -radius;
    if (d < 0) break;
    ++k[d];
  }
  return points;
}

namespace {

// Dense n-dimensional grid over [-extent, extent]^n, row-major.
class DenseGrid {
 public:
  DenseGrid(int n, long extent) : n_(n), extent_(extent), side_(2 * extent + 1) {
    stride_.assign(n, 1);
    for (int d = n - 2; d >= 0; --d) stride_[d] = stride_[d + 1] * side_;
    size_ = stride_[0] * side_;
  }

  std::size_t size() const { return size_; }
  std::size_t index(std::span<long const> k) const {
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) idx += static_cast<std::size_t>(k[d] + extent_) * stride_[d];
    return idx;
  }
  std::vector<long> point(std::size_t idx) const {
    std::vector<long> k(n_);
    for (int d = 0; d < n_; ++d) {
      k[d] = static_cast<long>(idx / stride_[d]) - extent_;
      idx %= stride_[d];
    }
    return k;
  }
  long extent() const { return extent_; }

  // Calls f(index) for every grid point within `h` of `center` in each
  // coordinate, clipped to the grid.
  template <typename F>
  void for_each_in_cube(std::span<long const> center, long h, F const& f) const {
    std::vector<long> lo(n_), hi(n_), k(n_);
    for (int d = 0; d < n_; ++d) {
      lo[d] = std::max(center[d] - h, -extent_);
      hi[d] = std::min(center[d] + h, extent_);
      if (lo[d] > hi[d]) return;
      k[d] = lo[d];
    }
    for (;;) {
      f(index(k));
      int d = n_ - 1;
      while (d >= 0 && k[d] == hi[d]) {
        k[d] = lo[d];
        --d;
      }
      if (d < 0) return;
      ++k[d];
    }
  }

 private:
  int n_;
  long extent_;
  std::size_t side_;
  std::vector<std::size_t> stride_;
  std::size_t size_;
};

}  // namespace

GridCover greedy_grid_cover(int n, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("grid cover needs a > 0");
  auto const ground = grid_ground_set(n);
  long radius = 0;
  for (auto const& k : ground) radius = std::max(radius, k.front());

  GridCover cover;
  cover.n = n;
  cover.a = a;
  cover.grid_step = Scalar(1, n);
  cover.half_width_steps = static_cast<long>(std::floor(n * a + 1e-9));
  cover.covering_half_width = a + 1.0 / n;
  cover.ground_set_size = ground.size();
  long const h = cover.half_width_steps;
  if (h >= radius) {
    cover.centers.push_back(std::vector<long>(n, 0));
    return cover;
  }

  DenseGrid const grid(n, radius + h);
  if (static_cast<double>(grid.size()) > 50.0 * kMaxGroundSet) {
    throw GroundSetTooLarge("candidate center grid too large");
  }
  std::vector<char> uncovered(grid.size(), 0);
  for (auto const& k : ground) uncovered[grid.index(k)] = 1;

  auto const count_uncovered = [&](std::size_t center) {
    std::size_t count = 0;
    auto const c = grid.point(center);
    grid.for_each_in_cube(c, h, [&](std::size_t i) { count += uncovered[i]; });
    return count;
  };

  // Max-heap on (count, -index): larger counts first, then smaller index.
  using Item = std::tuple<std::size_t, std::size_t>;
  auto const worse = [](Item const& x, Item const& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    return std::get<1>(x) > std::get<1>(y);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> heap(worse);
  // Initial counts are box sums of the ground indicator, computed one axis
  // at a time with a sliding window.
  std::vector<std::size_t> counts(uncovered.begin(), uncovered.end());
  std::size_t const side = static_cast<std::size_t>(2 * grid.extent() + 1);
  std::vector<std::size_t> line(side);
  for (int d = 0; d < n; ++d) {
    std::size_t stride = 1;
    for (int e = d + 1; e < n; ++e) stride *= side;
    for (std::size_t start = 0; start < grid.size(); ++start) {
      if ((start / stride) % side != 0) continue;
      for (std::size_t x = 0; x < side; ++x) line[x] = counts[start + x * stride];
      std::size_t window = 0;
      for (std::size_t x = 0; x < side && x <= static_cast<std::size_t>(h); ++x) {
        window += line[x];
      }
      for (std::size_t x = 0; x < side; ++x) {
        counts[start + x * stride] = window;
        if (x + h + 1 < side) window += line[x + h + 1];
        if (x >= static_cast<std::size_t>(h)) window -= line[x - h];
      }
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (counts[i] > 0) heap.emplace(counts[i], i);
  }

  std::size_t remaining = ground.size();
  while (remaining > 0 && !heap.empty()) {
    auto const [stored, idx] = heap.top();
    heap.pop();
    std::size_t const fresh = count_uncovered(idx);
    if (fresh == 0) continue;
    if (fresh < stored) {
      heap.emplace(fresh, idx);
      continue;
    }
    auto const c = grid.point(idx);
    grid.for_each_in_cube(c, h, [&](std::size_t i) {
      if (uncovered[i]) {
        uncovered[i] = 0;
        --remaining;
      }
    });
    cover.centers.push_back(c);
  }
  return cover;
}

bool covers_ground_set(GridCover const& cover) {
  for (auto const& k : grid_ground_set(cover.n)) {
    bool const hit = std::any_of(
        cover.centers.begin(), cover.centers.end(), [&](auto const& c) {
          for (int d = 0; d < cover.n; ++d) {
            if (std::labs(k[d] - c[d]) > cover.half_width_steps) return false;
          }
          return true;
        });
    if (!hit) return false;
  }
  return true;
}

}  // namespace lpsieve
