#include "report.hpp"

#include <cmath>

#include "lpsieve/io.hpp"

namespace lpsieve::cli {

namespace {

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json optional_rational(std::optional<Scalar> const& x) {
  if (!x) return nullptr;
  return format_rational(*x);
}

}  // namespace

Json rational_array(RatVec const& v) {
  Json out = Json::array();
  for (auto const& x : v) out.push_back(format_rational(x));
  return out;
}

Json integer_array(IntVec const& v) {
  Json out = Json::array();
  for (auto const& x : v) out.push_back(x.get_str());
  return out;
}

Json config_json(SolverConfig const& cfg, NormKind const& p) {
  SieveParams const sieve = cfg.sieve_params(Scalar(1), cfg.seed);
  Json out;
  out["p"] = p.to_string();
  out["epsilon"] = cfg.epsilon;
  out["seed"] = cfg.seed;
  out["retries"] = cfg.retries;
  out["inner_retries"] = cfg.inner_retries;
  out["delta"] = format_rational(cfg.lll.delta);
  out["xi"] = sieve.xi;
  out["c"] = sieve.c;
  out["a"] = cfg.a ? Json(*cfg.a) : Json(nullptr);
  out["caps"] = {{"samples", cfg.sample_cap},
                 {"list", cfg.list_cap},
                 {"targets", cfg.target_cap},
                 {"rejection", cfg.rejection_cap}};
  return out;
}

Json report_json(SolveReport const& r, NormKind const& p) {
  Json out;
  out["coeffs"] = integer_array(r.best.coeffs());
  out["coords"] = rational_array(r.best.coords());
  out["norm"] = number(r.achieved);
  out["norm_exact"] = optional_rational(r.achieved_exact);
  out["norm_exact_kind"] = p.is_two() ? "squared" : (p.has_exact_values() ? "exact" : "none");
  out["mu_used"] = format_rational(r.mu_used);
  out["retry_index"] = r.retry_index;
  out["seed"] = r.seed;
  Json history = Json::array();
  for (double h : r.history) history.push_back(number(h));
  out["history"] = history;
  out["grid_size"] = r.grid_size;
  out["n_samples"] = r.n_samples;
  out["n_samples_formula"] = number(r.n_samples_formula);
  out["degenerate"] = r.degenerate;
  out["guarantee"] = number(r.guarantee);
  out["a_eps"] = r.a_eps ? number(*r.a_eps) : Json(nullptr);
  out["max_list_size"] = r.max_list_size;
  out["cap_bound"] = {{"samples", r.samples_cap_bound},
                      {"targets", r.targets_cap_bound},
                      {"list_hits", r.list_cap_hits}};
  if (r.accepted_guess) {
    out["cover"] = {{"accepted_guess", format_rational(*r.accepted_guess)},
                    {"acceptance_bound", number(r.acceptance_bound.value_or(0.0))},
                    {"targets", r.cover_targets},
                    {"targets_formula", number(r.cover_targets_formula)}};
  }
  return out;
}

Json oracle_json(OracleAnswer const& answer, double achieved) {
  Json out;
  out["value"] = number(answer.value);
  out["exact"] = optional_rational(answer.exact);
  out["coeffs"] = integer_array(answer.best.coeffs());
  out["enumerated"] = answer.enumerated_count;
  if (answer.value > 0.0) {
    out["ratio"] = number(achieved / answer.value);
  } else {
    out["ratio"] = achieved == 0.0 ? Json(1.0) : Json(nullptr);
  }
  return out;
}

}  // namespace lpsieve::cli
