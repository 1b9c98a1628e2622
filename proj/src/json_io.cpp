#include "dmod/json_io.hpp"

namespace dmod {

Json rational_to_json(const Rational& q) {
  return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_object()) {
    Rational q(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
    if (q.get_den() == 0) throw Error("zero denominator in JSON rational");
    q.canonicalize();
    return q;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  throw Error("expected a rational, got " + j.dump());
}

Json scalar_to_json(const Scalar& s, unsigned digits) {
  if (s.is_exact()) return rational_to_json(s.exact());
  const Complex z = s.approx();
  return {{"re", z.re.str(digits)}, {"im", z.im.str(digits)}};
}

Scalar scalar_from_json(const Json& j, const Bindings& bindings) {
  if (j.is_object() && j.contains("re")) {
    return Complex(BigFloat(j.at("re").get<std::string>()), BigFloat(j.value("im", std::string("0"))));
  }
  if (j.is_string()) {
    auto it = bindings.find(j.get<std::string>());
    if (it != bindings.end()) return it->second;
  }
  return rational_from_json(j);
}

Json series_to_json(const SeriesRecord& s) {
  Json coeffs = Json::array();
  for (const auto& [k, c] : s.series.coeffs()) {
    Json term = rational_to_json(c);
    term["power"] = k;
    coeffs.push_back(term);
  }
  Json prefactor = nullptr;
  if (s.exponent) {
    prefactor = {{"exponent", rational_to_json(*s.exponent)},
                 {"text", s.series.gen() + "^(" + to_string(*s.exponent) + ")"}};
  }
  return {{"generator", s.series.gen()},
          {"prefactor", prefactor},
          {"coefficients", coeffs},
          {"precision", s.series.precision()}};
}

SeriesRecord series_from_json(const Json& j) {
  SeriesRecord out;
  out.series = AdicSeries(j.at("generator").get<std::string>(), j.at("precision").get<unsigned>());
  for (const auto& term : j.at("coefficients")) out.series.set(term.at("power").get<unsigned>(), rational_from_json(term));
  const Json& pre = j.at("prefactor");
  if (!pre.is_null()) out.exponent = rational_from_json(pre.at("exponent"));
  return out;
}

Json valuation_to_json(const Valuation& v) {
  if (v.is_finite()) return v.value;
  return v.str();
}

Json solve_result_to_json(const SolveResult& r) {
  Json vals = Json::array();
  for (const auto& v : r.residual_valuations) vals.push_back(valuation_to_json(v));
  return {{"series", series_to_json({r.series, r.exponent})},
          {"residual_valuations", vals},
          {"converged", r.converged},
          {"divisor", r.divisor},
          {"tangent_shift", r.tangent_shift},
          {"left_factor", r.left_factor}};
}

Json eigen_to_json(const EigenSolution& e, unsigned digits) {
  Json sstar = Json::array(), es = Json::array();
  for (const auto& c : e.sstar) sstar.push_back(scalar_to_json(c, digits));
  for (const auto& c : e.e_list) es.push_back(scalar_to_json(c, digits));
  return {{"qstar", scalar_to_json(e.qstar, digits)},
          {"sstar_coeffs", sstar},
          {"e_list", es},
          {"residual", e.residual.str(6)},
          {"exact", e.exact}};
}

namespace {

std::vector<Scalar> scalar_list(const Json& j, const Bindings& b) {
  std::vector<Scalar> out;
  for (const auto& v : j) out.push_back(scalar_from_json(v, b));
  return out;
}

}  // namespace

SeriesSpec series_spec_from_json(const Json& j, const Bindings& b) {
  if (!j.is_object() || j.size() != 1) throw Error("series description must be an object with one key");
  const auto& [key, body] = *j.items().begin();
  if (key == "hyp") {
    Scalar scale = body.contains("scale") ? scalar_from_json(body.at("scale"), b) : Scalar(1);
    return SeriesSpec::hypergeometric(scalar_list(body.at("upper"), b), scalar_list(body.at("lower"), b), scale);
  }
  if (key == "exp") return SeriesSpec::exponential(scalar_from_json(body, b));
  if (key == "product") {
    if (body.size() != 2) throw Error("product takes exactly two series");
    return SeriesSpec::product(series_spec_from_json(body[0], b), series_spec_from_json(body[1], b));
  }
  if (key == "apply")
    return SeriesSpec::apply(parse_operator(body.at("operator").get<std::string>(), b),
                             series_spec_from_json(body.at("series"), b));
  if (key == "factors")
    return SeriesSpec::euler_factors(scalar_list(body.at("e"), b), series_spec_from_json(body.at("series"), b));
  if (key == "scale")
    return SeriesSpec::scaled(scalar_from_json(body.at("factor"), b), series_spec_from_json(body.at("series"), b));
  throw Error("unknown series kind '" + key + "'");
}

}  // namespace dmod
