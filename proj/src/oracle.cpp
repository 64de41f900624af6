#include "lpsieve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpsieve/reduce.hpp"

namespace lpsieve {

namespace {

class Enumerator {
 public:
  Enumerator(Basis const& input, std::span<Scalar const> target,
             NormKind const& p, bool skip_zero)
      : p_(p),
        skip_zero_(skip_zero),
        lll_(lll_reduce_with_transform(input)),
        target_(target.begin(), target.end()),
        n_(input.dim()),
        x_(n_, 0) {
    canonicalize(target_);
    auto const gs = gram_schmidt(lll_.basis);
    mu_.assign(n_, std::vector<double>(n_, 0.0));
    sq_.resize(n_);
    center_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sq_[i] = gs.sq_norms[i].get_d();
      for (std::size_t j = 0; j < i; ++j) mu_[i][j] = gs.mu[i][j].get_d();
      center_[i] = Scalar(dot(target_, gs.orthogonal[i]) / gs.sq_norms[i]).get_d();
    }
    kappa_ = std::max(1.0, std::pow(static_cast<double>(n_), p.half_minus_inverse()));
  }

  OracleAnswer run(LatticeVector initial) {
    offer(std::move(initial));
    partial_.assign(n_ + 1, 0.0);
    descend(n_);
    OracleAnswer answer{*best_, best_value_, {}, count_, std::sqrt(radius_sq_)};
    answer.exact = exact_norm_value(best_offset_, p_);
    return answer;
  }

  Basis const& reduced() const { return lll_.basis; }

 private:
  void descend(std::size_t level) {
    if (level == 0) {
      leaf();
      return;
    }
    std::size_t const k = level - 1;
    double c = center_[k];
    for (std::size_t i = k + 1; i < n_; ++i) c -= mu_[i][k] * static_cast<double>(x_[i]);
    double const room = radius_sq_ - partial_[level];
    if (room < 0.0) return;
    double const half = std::sqrt(room / sq_[k]) + 1e-9;
    long const lo = static_cast<long>(std::ceil(c - half));
    long const hi = static_cast<long>(std::floor(c + half));
    for (long v = lo; v <= hi; ++v) {
      double const d = static_cast<double>(v) - c;
      double const part = partial_[level] + d * d * sq_[k];
      if (part > radius_sq_) continue;
      x_[k] = v;
      partial_[k] = part;
      descend(k);
    }
    x_[k] = 0;
  }

  void leaf() {
    if (skip_zero_ && std::all_of(x_.begin(), x_.end(), [](long v) { return v == 0; })) {
      return;
    }
    ++count_;
    IntVec reduced(n_);
    for (std::size_t i = 0; i < n_; ++i) reduced[i] = x_[i];
    offer(LatticeVector(lll_.basis, std::move(reduced)));
  }

  void offer(LatticeVector v) {
    IntVec input = to_input_coeffs(lll_.transform, v.coeffs());
    // SVP answers have a positive leading coefficient.
    if (skip_zero_) {
      auto lead = std::find_if(input.begin(), input.end(), [](Integer const& x) { return x != 0; });
      if (lead != input.end() && *lead < 0) {
        v = -v;
        for (auto& x : input) x = -x;
      }
    }
    RatVec offset = subtract(v.coords(), target_);
    if (best_) {
      int const order = compare_norms(offset, best_offset_, p_);
      if (order > 0) return;
      if (order == 0 && !lex_less(input, best_input_)) return;
    }
    best_value_ = lp_norm(offset, p_);
    best_offset_ = std::move(offset);
    best_input_ = input;
    best_ = std::move(v);
    double const r = kappa_ * best_value_;
    radius_sq_ = r * r * (1.0 + 1e-9) + 1e-300;
  }

 public:
  IntVec const& best_input() const { return best_input_; }

 private:
  NormKind p_;
  bool skip_zero_;
  LllResult lll_;
  RatVec target_;
  std::size_t n_;
  std::vector<long> x_;
  std::vector<std::vector<double>> mu_;
  std::vector<double> sq_;
  std::vector<double> center_;
  std::vector<double> partial_;
  double kappa_ = 1.0;
  double radius_sq_ = 0.0;
  std::optional<LatticeVector> best_;
  RatVec best_offset_;
  IntVec best_input_;
  double best_value_ = 0.0;
  std::size_t count_ = 0;
};

void check_dimension(Basis const& basis) {
  if (basis.dim() > kOracleMaxDim) {
    throw DimensionTooLarge("oracle supports n <= " + std::to_string(kOracleMaxDim) +
                            ", got " + std::to_string(basis.dim()));
  }
}

OracleAnswer finish(Enumerator const& e, Basis const& input, OracleAnswer answer) {
  answer.best = LatticeVector(input, e.best_input());
  return answer;
}

}  // namespace

OracleAnswer exact_svp(Basis const& basis, NormKind const& p) {
  check_dimension(basis);
  RatVec const zero(basis.dim());
  Enumerator e(basis, zero, p, true);
  // Start from the shortest reduced basis vector.
  Basis const& reduced = e.reduced();
  std::size_t pick = 0;
  for (std::size_t i = 1; i < reduced.dim(); ++i) {
    if (compare_norms(reduced.column(i), reduced.column(pick), p) < 0) pick = i;
  }
  IntVec unit(basis.dim());
  unit[pick] = 1;
  OracleAnswer answer = e.run(LatticeVector(reduced, std::move(unit)));
  return finish(e, basis, std::move(answer));
}

OracleAnswer exact_cvp(Basis const& basis, std::span<Scalar const> target,
                       NormKind const& p) {
  check_dimension(basis);
  if (target.size() != basis.dim()) {
    throw std::invalid_argument("target has the wrong dimension");
  }
  Enumerator e(basis, target, p, false);
  OracleAnswer answer = e.run(nearest_plane(e.reduced(), target));
  return finish(e, basis, std::move(answer));
}

}  // namespace lpsieve
