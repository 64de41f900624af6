#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "lpsieve/core.hpp"

namespace lpsieve::detail {

// Running minimum of ||offset||_p.  Doubles decide clear cases; values within
// a relative band are compared exactly and then by lexicographic key.
template <class Payload>
class Best {
 public:
  explicit Best(NormKind p) : p_(std::move(p)) {}

  bool empty() const { return !payload_.has_value(); }
  double value() const { return value_; }
  RatVec const& offset() const { return offset_; }
  IntVec const& key() const { return key_; }
  Payload const& payload() const { return *payload_; }

  // False only if `approx` is certainly worse than the current best.
  bool worth(double approx, double slack = 0.0) const {
    if (empty()) return true;
    double const band = kBand * std::max(approx, value_) + slack;
    return approx <= value_ + band;
  }

  bool offer(double approx, std::span<Scalar const> offset,
             std::span<Integer const> key, Payload payload) {
    if (!empty()) {
      double const band = kBand * std::max(approx, value_);
      if (approx > value_ + band) return false;
      if (approx >= value_ - band) {
        int const order = compare_norms(offset, offset_, p_);
        if (order > 0) return false;
        if (order == 0 && !lex_less(key, key_)) return false;
      }
    }
    value_ = lp_norm(offset, p_);
    offset_.assign(offset.begin(), offset.end());
    key_.assign(key.begin(), key.end());
    payload_ = std::move(payload);
    return true;
  }

 private:
  static constexpr double kBand = 1e-9;
  NormKind p_;
  double value_ = 0.0;
  RatVec offset_;
  IntVec key_;
  std::optional<Payload> payload_;
};

}  // namespace lpsieve::detail
