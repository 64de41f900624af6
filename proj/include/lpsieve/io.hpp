#pragma once

// Instance files.
//
//   # comment
//   3              dimension n
//   1 0 0          one basis column per line, n rationals each
//   0 2 1/2
//   0 0 3
//   t: 1/2 0 -1.25 optional target
//
// Rationals are integers, p/q or decimals.  '#' starts a comment anywhere.

#include <optional>
#include <string>
#include <string_view>

#include "lpsieve/core.hpp"

namespace lpsieve {

struct Instance {
  Basis basis;
  std::optional<RatVec> target;
};

// Throws ParseError (1-based line and column) on malformed text and
// RankDeficient on dependent columns.
Instance parse_instance(std::string_view text);

std::string emit_instance(Basis const& basis,
                          std::optional<RatVec> const& target = std::nullopt);

// Lowest-terms "p/q", or "p" for integers.
std::string format_rational(Scalar const& x);

// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(std::string_view content);

}  // namespace lpsieve
