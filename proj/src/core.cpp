#include "lpsieve/core.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace lpsieve {

namespace {

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

HighPrecision to_high_precision(Scalar const& x) {
  return HighPrecision(x.get_num().get_str()) /
         HighPrecision(x.get_den().get_str());
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

bool is_perfect_square(Integer const& z) {
  return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

}  // namespace

NormKind::NormKind(Scalar p) : p_(std::move(p)) {
  p_.canonicalize();
  if (p_ < 1) {
    throw std::invalid_argument("lp norm requires p >= 1");
  }
}

NormKind NormKind::infinity() {
  NormKind k;
  k.infinite_ = true;
  return k;
}

NormKind NormKind::parse(std::string_view text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return infinity();
  }
  auto const p = parse_rational(text);
  if (!p) {
    throw std::invalid_argument("malformed norm exponent '" +
                                std::string(text) + "'");
  }
  return NormKind(*p);
}

double NormKind::value() const {
  return infinite_ ? HUGE_VAL : p_.get_d();
}

double NormKind::half_minus_inverse() const {
  if (infinite_) return 0.5;
  return 0.5 - 1.0 / p_.get_d();
}

std::string NormKind::to_string() const {
  return infinite_ ? std::string("inf") : p_.get_str();
}

void canonicalize(RatVec& v) {
  for (auto& x : v) x.canonicalize();
}

double to_double(Scalar const& x) { return x.get_d(); }

std::vector<double> to_double(std::span<Scalar const> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [](Scalar const& x) { return x.get_d(); });
  return out;
}

Scalar from_double(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("cannot convert a non-finite double");
  }
  Scalar q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::optional<Scalar> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Scalar value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto const num = body.substr(0, slash);
    auto const den = body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) return std::nullopt;
    Integer d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    value = Scalar(Integer(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto const whole = body.substr(0, dot);
    auto const frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !is_digits(whole)) ||
        (!frac.empty() && !is_digits(frac))) {
      return std::nullopt;
    }
    Integer num(whole.empty() ? std::string("0") : std::string(whole), 10);
    Integer scale = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      scale *= 10;
    }
    value = Scalar(num, scale);
  } else {
    if (!is_digits(body)) return std::nullopt;
    value = Scalar(Integer(std::string(body), 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

Integer floor_of(Scalar const& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer round_of(Scalar const& x) { return floor_of(x + Scalar(1, 2)); }

Scalar dot(std::span<Scalar const> a, std::span<Scalar const> b) {
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Scalar squared_l2(std::span<Scalar const> v) { return dot(v, v); }

RatVec subtract(std::span<Scalar const> a, std::span<Scalar const> b) {
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

double lp_norm(std::span<double const> v, NormKind const& p) {
  double max_abs = 0.0;
  for (double x : v) max_abs = std::max(max_abs, std::fabs(x));
  if (p.is_infinite() || max_abs == 0.0) return max_abs;
  if (p.is_one()) {
    long double s = 0;
    for (double x : v) s += std::fabs(x);
    return static_cast<double>(s);
  }
  if (p.is_two()) {
    long double s = 0;
    for (double x : v) {
      long double const r = x / max_abs;
      s += r * r;
    }
    return static_cast<double>(max_abs * std::sqrt(s));
  }
  long double const e = p.value();
  long double s = 0;
  for (double x : v) s += std::pow(std::fabs(x) / max_abs, e);
  return static_cast<double>(max_abs * std::pow(s, 1.0L / e));
}

double lp_norm(std::span<Scalar const> v, NormKind const& p) {
  if (p.is_infinite() || p.is_one()) {
    return exact_norm_value(v, p)->get_d();
  }
  auto const d = to_double(v);
  return lp_norm(std::span<double const>(d), p);
}

std::optional<Scalar> exact_norm_value(std::span<Scalar const> v,
                                       NormKind const& p) {
  if (p.is_infinite()) {
    Scalar m = 0;
    for (auto const& x : v) m = std::max<Scalar>(m, abs(x));
    return m;
  }
  if (p.is_one()) {
    Scalar s = 0;
    for (auto const& x : v) s += abs(x);
    return s;
  }
  if (p.is_two()) return squared_l2(v);
  return std::nullopt;
}

int compare_norms(std::span<Scalar const> a, std::span<Scalar const> b,
                  NormKind const& p) {
  if (p.has_exact_values()) {
    return cmp(*exact_norm_value(a, p), *exact_norm_value(b, p));
  }
  HighPrecision const e = to_high_precision(p.exponent());
  auto power_sum = [&e](std::span<Scalar const> v) {
    HighPrecision s = 0;
    for (auto const& x : v) {
      if (sgn(x) != 0) s += boost::multiprecision::pow(to_high_precision(abs(x)), e);
    }
    return s;
  };
  HighPrecision const sa = power_sum(a);
  HighPrecision const sb = power_sum(b);
  if (sa < sb) return -1;
  if (sb < sa) return 1;
  return 0;
}

Scalar sqrt_lower(Scalar const& x) {
  if (sgn(x) < 0) throw std::invalid_argument("sqrt of a negative rational");
  if (sgn(x) == 0) return 0;
  if (is_perfect_square(x.get_num()) && is_perfect_square(x.get_den())) {
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
    return Scalar(n, d);
  }
  Scalar r = from_double(std::sqrt(x.get_d()));
  Scalar const shrink(Integer(1) << 40, (Integer(1) << 40) + 1);
  while (r * r > x) r *= shrink;
  return r;
}

Scalar sqrt_upper(Scalar const& x) {
  Scalar r = sqrt_lower(x);
  if (r * r == x) return r;
  Scalar const grow((Integer(1) << 40) + 1, Integer(1) << 40);
  r = from_double(std::sqrt(x.get_d()));
  while (r * r < x) r *= grow;
  return r;
}

Basis::Basis(std::vector<RatVec> columns) : columns_(std::move(columns)) {
  std::size_t const n = columns_.size();
  if (n == 0) throw std::invalid_argument("basis must have dimension >= 1");
  for (auto const& c : columns_) {
    if (c.size() != n) throw std::invalid_argument("basis must be square");
  }
  for (auto& c : columns_) canonicalize(c);
  // Gauss-Jordan on [A | I] with A(r, c) = columns_[c][r].
  std::vector<RatVec> a(n, RatVec(2 * n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = columns_[c][r];
    a[r][n + r] = 1;
  }
  Scalar det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw RankDeficient("basis columns are linearly dependent");
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    Scalar const inv = 1 / a[col][col];
    det *= a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      Scalar const f = a[r][col];
      for (std::size_t k = col; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  auto cache = std::make_shared<Cache>();
  cache->det = det;
  cache->inverse.assign(n, RatVec(n));
  cache->inverse_approx.assign(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      cache->inverse[r][c] = a[r][n + c];
      cache->inverse_approx[r][c] = cache->inverse[r][c].get_d();
    }
  }
  cache_ = std::move(cache);
}

Basis Basis::identity(std::size_t n) {
  std::vector<RatVec> cols(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i) cols[i][i] = 1;
  return Basis(std::move(cols));
}

RatVec Basis::apply(std::span<Integer const> coeffs) const {
  RatVec out(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    if (sgn(coeffs[j]) == 0) continue;
    Scalar const c(coeffs[j]);
    for (std::size_t i = 0; i < dim(); ++i) out[i] += c * columns_[j][i];
  }
  return out;
}

RatVec Basis::apply(std::span<long const> coeffs) const {
  RatVec out(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    if (coeffs[j] == 0) continue;
    Scalar const c(coeffs[j]);
    for (std::size_t i = 0; i < dim(); ++i) out[i] += c * columns_[j][i];
  }
  return out;
}

RatVec Basis::solve(std::span<Scalar const> y) const {
  RatVec out(dim());
  auto const& inv = cache_->inverse;
  for (std::size_t i = 0; i < dim(); ++i) out[i] = dot(inv[i], y);
  return out;
}

IntVec Basis::floor_coordinates(std::span<Scalar const> y) const {
  std::size_t const n = dim();
  std::vector<double> const yd = to_double(y);
  IntVec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto const& row = cache_->inverse_approx[i];
    double s = 0.0;
    double mag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += row[j] * yd[j];
      mag += std::fabs(row[j] * yd[j]);
    }
    // Rounding in the inverse, in y and in the sum stays far below 1e-12 mag.
    double const err = 1e-12 * mag + 1e-300;
    double const lo = std::floor(s - err);
    if (lo == std::floor(s + err) && std::fabs(s) < 0x1p52) {
      out[i] = static_cast<long>(lo);
    } else {
      out[i] = floor_of(dot(cache_->inverse[i], y));
    }
  }
  return out;
}

std::optional<IntVec> Basis::membership(std::span<Scalar const> y) const {
  auto const lambda = solve(y);
  IntVec coeffs(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (lambda[i].get_den() != 1) return std::nullopt;
    coeffs[i] = lambda[i].get_num();
  }
  return coeffs;
}

Basis Basis::scaled(Scalar const& lambda) const {
  auto cols = columns_;
  for (auto& c : cols) {
    for (auto& x : c) x *= lambda;
  }
  return Basis(std::move(cols));
}

LatticeVector::LatticeVector(Basis const& basis, IntVec coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis.dim()) {
    throw std::invalid_argument("coefficient vector has the wrong length");
  }
  coords_ = basis.apply(coeffs_);
}

LatticeVector::LatticeVector(Basis const& basis, IntVec coeffs, RatVec coords)
    : coeffs_(std::move(coeffs)), coords_(std::move(coords)) {
  if (coeffs_.size() != basis.dim() || !verify(basis)) {
    throw std::invalid_argument("coordinates do not match basis * coeffs");
  }
}

LatticeVector LatticeVector::zero(std::size_t n) {
  return LatticeVector(IntVec(n), RatVec(n));
}

bool LatticeVector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Integer const& z) { return sgn(z) == 0; });
}

bool LatticeVector::verify(Basis const& basis) const {
  return coords_.size() == basis.dim() && basis.apply(coeffs_) == coords_;
}

LatticeVector LatticeVector::operator-() const {
  IntVec c(coeffs_.size());
  RatVec x(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coeffs_[i];
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -coords_[i];
  return LatticeVector(std::move(c), std::move(x));
}

LatticeVector operator+(LatticeVector const& a, LatticeVector const& b) {
  IntVec c(a.coeffs_.size());
  RatVec x(a.coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a.coords_[i] + b.coords_[i];
  return LatticeVector(std::move(c), std::move(x));
}

LatticeVector operator-(LatticeVector const& a, LatticeVector const& b) {
  IntVec c(a.coeffs_.size());
  RatVec x(a.coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a.coords_[i] - b.coords_[i];
  return LatticeVector(std::move(c), std::move(x));
}

bool lex_less(std::span<Integer const> a, std::span<Integer const> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

GramSchmidt gram_schmidt(Basis const& basis) {
  std::size_t const n = basis.dim();
  GramSchmidt gs;
  gs.orthogonal.reserve(n);
  gs.mu.assign(n, RatVec(n));
  gs.sq_norms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVec v = basis.column(i);
    for (std::size_t j = 0; j < i; ++j) {
      Scalar const m = dot(basis.column(i), gs.orthogonal[j]) / gs.sq_norms[j];
      gs.mu[i][j] = m;
      if (sgn(m) == 0) continue;
      for (std::size_t k = 0; k < n; ++k) v[k] -= m * gs.orthogonal[j][k];
    }
    Scalar norm = squared_l2(v);
    if (sgn(norm) == 0) throw RankDeficient("zero Gram-Schmidt vector");
    gs.orthogonal.push_back(std::move(v));
    gs.sq_norms.push_back(std::move(norm));
  }
  return gs;
}

LatticeVector nearest_plane(Basis const& basis, std::span<Scalar const> t) {
  std::size_t const n = basis.dim();
  auto const gs = gram_schmidt(basis);
  RatVec residual(t.begin(), t.end());
  IntVec coeffs(n);
  for (std::size_t i = n; i-- > 0;) {
    Integer const c = round_of(dot(residual, gs.orthogonal[i]) / gs.sq_norms[i]);
    coeffs[i] = c;
    if (sgn(c) == 0) continue;
    Scalar const cq(c);
    for (std::size_t k = 0; k < n; ++k) residual[k] -= cq * basis.column(i)[k];
  }
  return LatticeVector(basis, std::move(coeffs));
}

}  // namespace lpsieve
