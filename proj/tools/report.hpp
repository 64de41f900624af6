#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "lpsieve/cvp.hpp"
#include "lpsieve/oracle.hpp"

namespace lpsieve::cli {

using Json = nlohmann::ordered_json;

Json rational_array(RatVec const& v);
Json integer_array(IntVec const& v);
Json config_json(SolverConfig const& cfg, NormKind const& p);
Json report_json(SolveReport const& report, NormKind const& p);
Json oracle_json(OracleAnswer const& answer, double achieved);

}  // namespace lpsieve::cli
