#pragma once

#include <vector>

#include "lpsieve/core.hpp"

namespace lpsieve {

struct LllParams {
  Scalar delta{3, 4};

  // Throws std::invalid_argument unless 1/4 < delta < 1.
  void validate() const;
};

struct LllResult {
  Basis basis;
  // Row j holds the coefficients of the j-th reduced column in terms of the
  // input columns.  Unimodular.
  std::vector<IntVec> transform;
};

// Exact-rational LLL.  Size reduction only touches |mu| > 1/2, so reduced
// input is a fixed point.
LllResult lll_reduce_with_transform(Basis const& basis,
                                    LllParams const& params = {});
Basis lll_reduce(Basis const& basis, LllParams const& params = {});

bool is_lll_reduced(Basis const& basis, LllParams const& params = {});

// Coefficients of a vector given in the reduced basis, rewritten in terms
// of the input basis.
IntVec to_input_coeffs(std::vector<IntVec> const& transform,
                       std::span<Integer const> reduced_coeffs);

}  // namespace lpsieve
