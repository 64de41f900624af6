#pragma once

// Exact SVP_p / CVP_p by enumeration, for small dimension only.  Lattice
// points are enumerated depth-first over Gram-Schmidt coordinates of an
// LLL-reduced basis inside an l2 ball whose radius is certified by norm
// equivalence:  ||x||_2 <= max(1, n^{1/2 - 1/p}) ||x||_p.  The radius shrinks
// whenever a better lp value is found, and every survivor is re-scored in
// exact (or 50-digit) arithmetic.

#include <cstddef>
#include <optional>
#include <span>

#include "lpsieve/core.hpp"

namespace lpsieve {

inline constexpr std::size_t kOracleMaxDim = 10;

struct OracleAnswer {
  // Coefficients are relative to the basis passed in.
  LatticeVector best;
  double value = 0.0;
  // ||.||_p for p in {1, inf}, ||.||_2^2 for p = 2.
  std::optional<Scalar> exact;
  std::size_t enumerated_count = 0;
  // l2 radius that certifies the optimum.
  double certified_radius = 0.0;
};

// Throws DimensionTooLarge above kOracleMaxDim.
OracleAnswer exact_svp(Basis const& basis, NormKind const& p);
OracleAnswer exact_cvp(Basis const& basis, std::span<Scalar const> target,
                       NormKind const& p);

}  // namespace lpsieve
