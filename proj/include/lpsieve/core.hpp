#pragma once

// Exact lattice data: rationals, bases, lattice vectors, lp norms and
// Gram-Schmidt orthogonalization.  Lattices are generated by the columns of
// a square full-rank rational matrix.  Free functions expect rationals in
// lowest terms; Basis and the solvers canonicalize their inputs.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpsieve/errors.hpp"

namespace lpsieve {

using Scalar = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Scalar>;
using IntVec = std::vector<Integer>;

// The exponent of an lp norm, p in [1, inf].
class NormKind {
 public:
  // Throws std::invalid_argument unless p >= 1.
  explicit NormKind(Scalar p);
  explicit NormKind(long p) : NormKind(Scalar(p)) {}

  static NormKind infinity();
  // Accepts "inf", integers, "p/q" and decimals such as "1.5".
  static NormKind parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  // Only meaningful for finite norms.
  Scalar const& exponent() const { return p_; }
  // HUGE_VAL for the max norm.
  double value() const;

  bool is_one() const { return !infinite_ && p_ == 1; }
  bool is_two() const { return !infinite_ && p_ == 2; }
  bool at_least_two() const { return infinite_ || p_ >= 2; }
  // p in {1, 2, inf}: norms (squared for p = 2) are exact on rational input.
  bool has_exact_values() const { return infinite_ || p_ == 1 || p_ == 2; }

  // 1/2 - 1/p, so that ||x||_2 <= n^{holder} ||x||_p for p >= 2.
  double half_minus_inverse() const;

  std::string to_string() const;

  friend bool operator==(NormKind const& a, NormKind const& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }

 private:
  NormKind() = default;
  bool infinite_ = false;
  Scalar p_{2};
};

// Reduces every entry to lowest terms; GMP requires this of its inputs.
void canonicalize(RatVec& v);

double to_double(Scalar const& x);
std::vector<double> to_double(std::span<Scalar const> v);
// Exact conversion of a finite double.
Scalar from_double(double x);
// Integers, "p/q" and plain decimals ("-1.25"); nullopt if malformed or the
// denominator is zero.
std::optional<Scalar> parse_rational(std::string_view text);
Integer floor_of(Scalar const& x);
// Nearest integer, halves rounded up.
Integer round_of(Scalar const& x);

Scalar dot(std::span<Scalar const> a, std::span<Scalar const> b);
Scalar squared_l2(std::span<Scalar const> v);
RatVec subtract(std::span<Scalar const> a, std::span<Scalar const> b);

double lp_norm(std::span<Scalar const> v, NormKind const& p);
double lp_norm(std::span<double const> v, NormKind const& p);
// Exact value for p in {1, inf}, the squared norm for p = 2, nullopt otherwise.
std::optional<Scalar> exact_norm_value(std::span<Scalar const> v,
                                       NormKind const& p);
// Three-way comparison of ||a||_p and ||b||_p.  Exact for p in {1, 2, inf};
// 50 significant digits otherwise.
int compare_norms(std::span<Scalar const> a, std::span<Scalar const> b,
                  NormKind const& p);

// Largest rational r with r <= sqrt(x) found by a double estimate that is
// corrected until r^2 <= x.  Exact when x is a rational square.
Scalar sqrt_lower(Scalar const& x);
Scalar sqrt_upper(Scalar const& x);

// A square full-rank rational matrix, stored by columns.  Immutable.
class Basis {
 public:
  // Throws RankDeficient if the columns are dependent and
  // std::invalid_argument if the shape is not square.
  explicit Basis(std::vector<RatVec> columns);

  static Basis identity(std::size_t n);

  std::size_t dim() const { return columns_.size(); }
  std::vector<RatVec> const& columns() const { return columns_; }
  RatVec const& column(std::size_t i) const { return columns_[i]; }

  RatVec apply(std::span<Integer const> coeffs) const;
  RatVec apply(std::span<long const> coeffs) const;
  // Coordinates of y with respect to the columns (exact B^{-1} y).
  RatVec solve(std::span<Scalar const> y) const;
  // floor(B^{-1} y) componentwise, exact; doubles decide clear cases.
  IntVec floor_coordinates(std::span<Scalar const> y) const;
  // Integer coefficients of y if y lies in the lattice.
  std::optional<IntVec> membership(std::span<Scalar const> y) const;

  Scalar const& determinant() const { return cache_->det; }
  Basis scaled(Scalar const& lambda) const;

  // Row-major inverse, row i gives the i-th coordinate functional.
  std::vector<RatVec> const& inverse() const { return cache_->inverse; }

  friend bool operator==(Basis const& a, Basis const& b) {
    return a.columns_ == b.columns_;
  }

 private:
  struct Cache {
    Scalar det;
    std::vector<RatVec> inverse;
    std::vector<std::vector<double>> inverse_approx;
  };
  std::vector<RatVec> columns_;
  std::shared_ptr<Cache const> cache_;
};

// An integer coefficient vector together with its ambient coordinates.
class LatticeVector {
 public:
  LatticeVector(Basis const& basis, IntVec coeffs);
  // Throws std::invalid_argument unless coords == basis * coeffs exactly.
  LatticeVector(Basis const& basis, IntVec coeffs, RatVec coords);

  static LatticeVector zero(std::size_t n);

  IntVec const& coeffs() const { return coeffs_; }
  RatVec const& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  bool is_zero() const;

  // True if coords == basis * coeffs.
  bool verify(Basis const& basis) const;

  LatticeVector operator-() const;
  friend LatticeVector operator+(LatticeVector const& a,
                                 LatticeVector const& b);
  friend LatticeVector operator-(LatticeVector const& a,
                                 LatticeVector const& b);
  friend bool operator==(LatticeVector const& a, LatticeVector const& b) {
    return a.coeffs_ == b.coeffs_ && a.coords_ == b.coords_;
  }

 private:
  LatticeVector(IntVec coeffs, RatVec coords)
      : coeffs_(std::move(coeffs)), coords_(std::move(coords)) {}
  IntVec coeffs_;
  RatVec coords_;
};

// Lexicographic order on coefficient vectors, used for tie-breaking.
bool lex_less(std::span<Integer const> a, std::span<Integer const> b);

struct GramSchmidt {
  std::vector<RatVec> orthogonal;   // b*_i
  std::vector<RatVec> mu;           // mu[i][j] for j < i
  std::vector<Scalar> sq_norms;     // ||b*_i||^2
};

GramSchmidt gram_schmidt(Basis const& basis);

// Babai's nearest plane: a lattice vector close to t, exact.
LatticeVector nearest_plane(Basis const& basis, std::span<Scalar const> t);

}  // namespace lpsieve
