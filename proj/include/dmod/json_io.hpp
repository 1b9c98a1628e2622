#pragma once

#include <optional>

#include "json.hpp"

#include "dmod/heun.hpp"
#include "dmod/newton.hpp"
#include "dmod/opdsl.hpp"

namespace dmod {

using Json = nlohmann::json;

// {"num": "...", "den": "..."}; decimal strings keep rationals bit-exact.
Json rational_to_json(const Rational& q);
// Accepts the object form, a "p/q" string, or a JSON integer.
Rational rational_from_json(const Json& j);
Json scalar_to_json(const Scalar& s, unsigned digits = 30);
Scalar scalar_from_json(const Json& j, const Bindings& bindings = {});

struct SeriesRecord {
  AdicSeries series;
  std::optional<Rational> exponent;  // x^exponent prefactor of a Frobenius solution

  friend bool operator==(const SeriesRecord& a, const SeriesRecord& b) {
    return a.series == b.series && a.exponent == b.exponent;
  }
};

Json series_to_json(const SeriesRecord& s);
SeriesRecord series_from_json(const Json& j);

Json valuation_to_json(const Valuation& v);
Json solve_result_to_json(const SolveResult& r);
Json eigen_to_json(const EigenSolution& e, unsigned digits = 30);

// {"hyp": {"upper": [...], "lower": [...], "scale": v}}, {"exp": v},
// {"product": [a, b]}, {"apply": {"operator": "...", "series": s}},
// {"factors": {"e": [...], "series": s}}, {"scale": {"factor": v, "series": s}}.
SeriesSpec series_spec_from_json(const Json& j, const Bindings& bindings = {});

}  // namespace dmod
