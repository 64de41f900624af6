#include "lpsieve/reduce.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace lpsieve {

void LllParams::validate() const {
  if (!(delta > Scalar(1, 4) && delta < 1)) {
    throw std::invalid_argument("LLL delta must lie in (1/4, 1)");
  }
}

namespace {

class ExactLll {
 public:
  ExactLll(Basis const& basis, Scalar delta)
      : n_(basis.dim()), delta_(std::move(delta)), b_(basis.columns()) {
    u_.assign(n_, IntVec(n_));
    for (std::size_t i = 0; i < n_; ++i) u_[i][i] = 1;
    auto gs = gram_schmidt(basis);
    mu_ = std::move(gs.mu);
    norms_ = std::move(gs.sq_norms);
  }

  void run() {
    std::size_t k = 1;
    while (k < n_) {
      size_reduce(k, k - 1);
      Scalar const& m = mu_[k][k - 1];
      if (norms_[k] < (delta_ - m * m) * norms_[k - 1]) {
        swap(k);
        k = std::max<std::size_t>(1, k - 1);
      } else {
        for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
        ++k;
      }
    }
  }

  std::vector<RatVec> take_columns() { return std::move(b_); }
  std::vector<IntVec> take_transform() { return std::move(u_); }

 private:
  void size_reduce(std::size_t k, std::size_t l) {
    if (abs(mu_[k][l]) <= Scalar(1, 2)) return;
    Integer const q = round_of(mu_[k][l]);
    Scalar const qs(q);
    for (std::size_t i = 0; i < n_; ++i) b_[k][i] -= qs * b_[l][i];
    for (std::size_t i = 0; i < n_; ++i) u_[k][i] -= q * u_[l][i];
    mu_[k][l] -= qs;
    for (std::size_t j = 0; j < l; ++j) mu_[k][j] -= qs * mu_[l][j];
  }

  void swap(std::size_t k) {
    Scalar const m = mu_[k][k - 1];
    Scalar const big_b = norms_[k] + m * m * norms_[k - 1];
    if (sgn(big_b) == 0) throw RankDeficient("zero vector during LLL");
    mu_[k][k - 1] = m * norms_[k - 1] / big_b;
    norms_[k] = norms_[k - 1] * norms_[k] / big_b;
    norms_[k - 1] = big_b;
    std::swap(b_[k], b_[k - 1]);
    std::swap(u_[k], u_[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu_[k][j], mu_[k - 1][j]);
    for (std::size_t i = k + 1; i < n_; ++i) {
      Scalar const t = mu_[i][k];
      mu_[i][k] = mu_[i][k - 1] - m * t;
      mu_[i][k - 1] = t + mu_[k][k - 1] * mu_[i][k];
    }
  }

  std::size_t n_;
  Scalar delta_;
  std::vector<RatVec> b_;
  std::vector<IntVec> u_;
  std::vector<RatVec> mu_;
  std::vector<Scalar> norms_;
};

}  // namespace

LllResult lll_reduce_with_transform(Basis const& basis,
                                    LllParams const& params) {
  params.validate();
  ExactLll lll(basis, params.delta);
  lll.run();
  auto transform = lll.take_transform();
  return LllResult{Basis(lll.take_columns()), std::move(transform)};
}

Basis lll_reduce(Basis const& basis, LllParams const& params) {
  return lll_reduce_with_transform(basis, params).basis;
}

bool is_lll_reduced(Basis const& basis, LllParams const& params) {
  params.validate();
  auto const gs = gram_schmidt(basis);
  for (std::size_t i = 1; i < basis.dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (abs(gs.mu[i][j]) > Scalar(1, 2)) return false;
    }
    Scalar const& m = gs.mu[i][i - 1];
    if (gs.sq_norms[i] < (params.delta - m * m) * gs.sq_norms[i - 1]) {
      return false;
    }
  }
  return true;
}

IntVec to_input_coeffs(std::vector<IntVec> const& transform,
                       std::span<Integer const> reduced_coeffs) {
  std::size_t const n = transform.size();
  IntVec out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(reduced_coeffs[j]) == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += reduced_coeffs[j] * transform[j][i];
    }
  }
  return out;
}

}  // namespace lpsieve
