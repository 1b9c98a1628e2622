#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dmod/fixture.hpp"
#include "dmod/heun.hpp"
#include "dmod/json_io.hpp"
#include "dmod/realize.hpp"

using namespace dmod;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Input problems (bad flags, syntax errors) exit with the usage code.
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  bool json = false;
  unsigned digits = 50;
  std::string op, divisor = "d", order, pair = "xd", seed = "1", params;
  unsigned precision = 16;
  // divide
  std::string by;
  // heun
  std::string variant = "heun", a = "0", alpha, beta = "0", gamma, delta, epsilon;
  std::optional<unsigned> degree;
  unsigned terms = 30;
  std::string qstar, e_values;
  // identity
  std::string lhs, rhs;
  // difference
  unsigned bessel = 0;
  long x = 0;
  std::optional<long> check_to;
  // fixture
  std::vector<std::string> fixtures;
};

std::string read_arg(const std::string& v) {
  if (v.empty() || v[0] != '@') return v;
  std::ifstream in(v.substr(1));
  if (!in) throw UsageError("cannot read " + v.substr(1));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

template <class F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

Bindings bindings_of(const Options& o) {
  return as_usage([&] { return parse_bindings(o.params); });
}

Rational rat(const std::string& name, const std::string& v) {
  if (v.empty()) throw UsageError("--" + name + " is required");
  return as_usage([&] { return parse_rational(v); });
}

std::string default_order(const std::string& divisor) {
  if (divisor == "x" || divisor == "special-dc") return "dual";
  if (divisor.rfind("xd:", 0) == 0) return "graded";
  return "standard";
}

Json base_json(const std::string& cmd, const Options& o) {
  Json in = {{"params", o.params}};
  if (!o.op.empty()) in["operator"] = o.op;
  return {{"command", cmd}, {"inputs", in}};
}

void print_series(const SeriesRecord& s) {
  if (s.exponent) std::cout << "prefactor " << s.series.gen() << "^(" << to_string(*s.exponent) << ")\n";
  std::cout << "power  coefficient\n";
  for (const auto& [k, c] : s.series.coeffs()) std::cout << std::setw(5) << k << "  " << to_string(c) << "\n";
  std::cout << "precision " << s.series.precision() << "\n";
}

int cmd_solve(const Options& o, Json& out) {
  SolveRequest req;
  req.op = read_arg(o.op);
  req.bindings = bindings_of(o);
  req.divisor = o.divisor;
  req.order = o.order.empty() ? default_order(o.divisor) : o.order;
  req.pair = o.pair;
  req.seed = o.seed;
  req.precision = o.precision;
  out["inputs"].update({{"divisor", req.divisor}, {"order", req.order}, {"pair", req.pair}, {"seed", req.seed},
                        {"precision", req.precision}});
  SolveConfig cfg = as_usage([&] { return build_config(req); });
  SolveResult r = newton_iterate(cfg);
  Json sr = solve_result_to_json(r);
  out["series"] = sr["series"];
  out["residual_valuations"] = sr["residual_valuations"];
  out["divisor_description"] = r.divisor;
  out["verified"] = r.converged;
  if (!o.json) {
    std::cout << "divisor " << r.divisor << "\n";
    print_series({r.series, r.exponent});
    std::cout << "residual valuations";
    for (const auto& v : r.residual_valuations) std::cout << " " << v.str();
    std::cout << "\n" << (r.converged ? "converged" : "not converged") << "\n";
  }
  return r.converged ? kOk : kFailed;
}

int cmd_indicial(const Options& o, Json& out) {
  const Bindings b = bindings_of(o);
  QWeyl L = as_usage([&] { return parse_operator(read_arg(o.op), b); });
  PointKind kind = classify_point(L);
  IndicialData ind = indicial_polynomial(L, o.digits);
  auto radius = radius_bound(L, o.digits);
  Json roots = Json::array(), rroots = Json::array();
  for (const auto& z : ind.roots) roots.push_back({{"re", z.re.str(o.digits)}, {"im", z.im.str(o.digits)}});
  for (const auto& r : ind.rational_roots) rroots.push_back(rational_to_json(r));
  out["point"] = to_string(kind);
  out["indicial_polynomial"] = to_string(ind.polynomial);
  out["roots"] = roots;
  out["rational_roots"] = rroots;
  out["radius_bound"] = radius ? Json(radius->str(o.digits)) : Json("inf");
  out["verified"] = true;
  if (!o.json) {
    std::cout << "point " << to_string(kind) << "\n";
    std::cout << "indicial polynomial " << to_string(ind.polynomial) << "\n";
    for (const auto& r : ind.rational_roots) std::cout << "rational root " << to_string(r) << "\n";
    for (const auto& z : ind.roots) std::cout << "root " << to_string(z, 20) << "\n";
    std::cout << "radius bound " << (radius ? radius->str(20) : std::string("inf")) << "\n";
  }
  return kOk;
}

int cmd_divide(const Options& o, Json& out) {
  const Bindings b = bindings_of(o);
  QWeyl f = as_usage([&] { return parse_operator(read_arg(o.op), b); });
  const std::string order = o.order.empty() ? default_order(o.divisor) : o.order;
  QWeyl k;
  OrderSpec spec = OrderSpec::standard();
  bool exact_only = false;
  as_usage([&] {
    if (!o.by.empty()) {
      k = parse_operator(read_arg(o.by), b);
    } else if (o.divisor == "d") {
      k = QWeyl::lower();
    } else if (o.divisor == "x") {
      k = QWeyl::raise();
    } else if (o.divisor.rfind("xd:", 0) == 0) {
      auto it = b.find(o.divisor.substr(3));
      k = QWeyl::term(1, 1, 1).plus_scalar(-(it != b.end() ? it->second : parse_rational(o.divisor.substr(3))));
    } else if (o.divisor == "special-dc") {
      for (const char* n : {"a", "b"})
        if (!b.count(n)) throw UsageError(std::string("special-dc needs the binding ") + n);
      k = doubly_confluent_divisor(b.at("a"), b.at("b"));
      exact_only = true;
    } else {
      throw UsageError("unknown divisor '" + o.divisor + "'");
    }
    if (order == "dual")
      spec = OrderSpec::dual();
    else if (order == "graded")
      spec = OrderSpec::graded();
    else if (order != "standard")
      throw UsageError("unknown order '" + order + "'");
    return 0;
  });
  Division<Rational> d = exact_only ? divide_exact_first_order(f, k, spec) : divide_first_order(f, k, spec);
  QPoly rem_poly = d.remainder;
  QWeyl rem = spec.mode == OrderMode::Dual ? QWeyl::from_lower_poly(d.remainder, f.pair())
                                           : QWeyl::from_raise_poly(d.remainder, f.pair());
  const bool ok = weyl_mul(d.quotient, k) + rem == f;
  out["inputs"].update({{"divisor", k.str()}, {"order", order}});
  out["quotient"] = d.quotient.str();
  out["remainder"] = to_string(rem_poly);
  out["verified"] = ok;
  if (!o.json) {
    std::cout << "divisor   " << k.str() << "\n";
    std::cout << "quotient  " << d.quotient.str() << "\n";
    std::cout << "remainder " << to_string(rem_poly) << "\n";
    std::cout << (ok ? "re-multiplication verified" : "re-multiplication FAILED") << "\n";
  }
  return ok ? kOk : kFailed;
}

HeunParams heun_params(const Options& o) {
  HeunParams p;
  p.variant = as_usage([&] { return parse_heun_variant(o.variant); });
  p.a = rat("a", o.a);
  p.alpha = rat("alpha", o.alpha);
  p.beta = rat("beta", o.beta);
  p.gamma = rat("gamma", o.gamma);
  const bool confluent = p.variant == HeunVariant::Confluent;
  if (!confluent && o.delta.empty() && o.epsilon.empty()) throw UsageError("give --delta or --epsilon");
  if (confluent && (o.delta.empty() || o.epsilon.empty())) throw UsageError("the confluent variant needs --delta and --epsilon");
  // The missing one of delta, epsilon follows from alpha + beta - gamma - delta - epsilon + 1 = 0.
  const Rational rest = p.alpha + p.beta - p.gamma + 1;
  p.delta = o.delta.empty() ? Rational(rest - rat("epsilon", o.epsilon)) : rat("delta", o.delta);
  p.epsilon = o.epsilon.empty() ? Rational(rest - p.delta) : rat("epsilon", o.epsilon);
  as_usage([&] {
    p.check();
    return 0;
  });
  return p;
}

Json params_json(const HeunParams& p) {
  return {{"variant", to_string(p.variant)},  {"a", rational_to_json(p.a)},
          {"alpha", rational_to_json(p.alpha)}, {"beta", rational_to_json(p.beta)},
          {"gamma", rational_to_json(p.gamma)}, {"delta", rational_to_json(p.delta)},
          {"epsilon", rational_to_json(p.epsilon)}};
}

int cmd_heun_eigen(const Options& o, Json& out) {
  HeunParams p = heun_params(o);
  out["inputs"]["heun"] = params_json(p);
  HeunEigenReport rep = heun_eigen(p, o.degree, o.digits, o.terms);
  Json matrix = Json::array(), eig = Json::array();
  for (const auto& row : rep.matrix) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    matrix.push_back(r);
  }
  for (const auto& c : rep.eigen) {
    Json e = eigen_to_json(c.solution, o.digits);
    if (c.factorization)
      e["factorization"] = {{"ok", c.factorization->ok}, {"norm", c.factorization->norm.str(6)},
                            {"remainder", c.factorization->remainder}};
    if (c.identity)
      e["identity"] = {{"equal", c.identity->equal}, {"max_error", c.identity->max_error.str(6)}};
    eig.push_back(e);
  }
  out["matrix"] = matrix;
  out["charpoly"] = to_string(rep.charpoly);
  out["eigen"] = eig;
  out["verified"] = rep.verified;
  if (!o.json) {
    std::cout << "remainder matrix (" << ladder_name(p) << " basis)\n";
    for (const auto& row : rep.matrix) {
      for (const auto& v : row) std::cout << std::setw(14) << to_string(v);
      std::cout << "\n";
    }
    std::cout << "characteristic polynomial " << to_string(rep.charpoly) << "\n";
    for (const auto& c : rep.eigen) {
      std::cout << "q* = " << c.solution.qstar.str(20) << "\n  S* coefficients:";
      for (const auto& s : c.solution.sstar) std::cout << " " << s.str(20);
      std::cout << "\n  e:";
      for (const auto& e : c.solution.e_list) std::cout << " " << e.str(20);
      std::cout << "\n";
      if (c.factorization)
        std::cout << "  factorization " << (c.factorization->ok ? "ok" : "FAILED") << " (norm "
                  << c.factorization->norm.str(6) << ")\n";
      if (c.identity) std::cout << "  series identity " << (c.identity->equal ? "ok" : "FAILED") << "\n";
    }
  }
  return rep.verified ? kOk : kFailed;
}

std::vector<Scalar> scalar_list(const std::string& text) {
  std::vector<Scalar> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(as_usage([&] { return scalar_from_json(Json(item)); }));
  return out;
}

int cmd_factor_check(const Options& o, Json& out) {
  HeunParams p = heun_params(o);
  out["inputs"]["heun"] = params_json(p);
  if (o.qstar.empty() || o.e_values.empty()) throw UsageError("--qstar and --e are required");
  const Rational q = rat("qstar", o.qstar);
  std::vector<Rational> e;
  for (const auto& s : scalar_list(o.e_values)) e.push_back(s.exact());
  FactorizationCheck fc = verify_factorization(factorization_target(p, e), heun_operator(p), q);
  out["remainder"] = fc.remainder;
  out["verified"] = fc.ok;
  if (!o.json) std::cout << "remainder " << fc.remainder << "\n" << (fc.ok ? "factorization ok" : "factorization FAILED") << "\n";
  return fc.ok ? kOk : kFailed;
}

int cmd_identity_check(const Options& o, Json& out) {
  const Bindings b = bindings_of(o);
  SeriesSpec l = as_usage([&] { return series_spec_from_json(Json::parse(read_arg(o.lhs)), b); });
  SeriesSpec r = as_usage([&] { return series_spec_from_json(Json::parse(read_arg(o.rhs)), b); });
  out["inputs"].update({{"lhs", read_arg(o.lhs)}, {"rhs", read_arg(o.rhs)}, {"terms", o.terms}});
  IdentityCheck ic = verify_identity_series(l, r, o.terms, o.digits);
  out["verified"] = ic.equal;
  out["exact"] = ic.exact;
  out["max_error"] = ic.max_error.str(6);
  if (ic.mismatch) out["mismatch"] = {{"power", *ic.mismatch}, {"lhs", ic.lhs}, {"rhs", ic.rhs}};
  if (!o.json) {
    std::cout << (ic.equal ? "identity holds" : "identity FAILED") << " through x^" << o.terms - 1
              << (ic.exact ? " (exact)" : " (floating, max error " + ic.max_error.str(6) + ")") << "\n";
    if (ic.mismatch) std::cout << "first mismatch at x^" << *ic.mismatch << ": " << ic.lhs << " vs " << ic.rhs << "\n";
  }
  return ic.equal ? kOk : kFailed;
}

int cmd_difference(const Options& o, Json& out) {
  out["inputs"].update({{"bessel", o.bessel}, {"x", o.x}});
  if (o.check_to) {
    if (*o.check_to < 0) throw UsageError("--check-to must be nonnegative");
    // The shift D drops one point at the right end of the table.
    FunctionTable t = realize_difference(bessel_series(o.bessel, static_cast<unsigned>(*o.check_to) + 3))
                          .table(0, *o.check_to + 1);
    FunctionTable r = apply_difference(bessel_operator(Rational(o.bessel)), t).restricted(0, *o.check_to);
    bool zero = std::all_of(r.values.begin(), r.values.end(), [](const Rational& v) { return sgn(v) == 0; });
    out["inputs"]["check_to"] = *o.check_to;
    out["verified"] = zero;
    if (!o.json)
      std::cout << "Bessel operator on the table over [0, " << *o.check_to << "]: "
                << (zero ? "identically zero" : "NONZERO") << "\n";
    return zero ? kOk : kFailed;
  }
  Rational v = difference_bessel(o.bessel, o.x);
  out["value"] = rational_to_json(v);
  out["verified"] = true;
  if (!o.json) std::cout << "J_" << o.bessel << "(" << o.x << ") = " << to_string(v) << "\n";
  return kOk;
}

int cmd_fixture(const Options& o, Json& out) {
  Json reports = Json::array();
  bool all = true;
  for (const auto& path : o.fixtures) {
    Fixture f = as_usage([&] { return load_fixture(path); });
    FixtureReport r = run_fixture(f);
    all = all && r.passed;
    reports.push_back(report_to_json(r));
    if (!o.json) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.error.empty()) std::cout << ": " << r.error;
      std::cout << "\n";
      size_t shown = 0;
      for (const auto& m : r.mismatches) {
        if (++shown > 5) {
          std::cout << "  ... " << r.mismatches.size() - 5 << " more mismatches\n";
          break;
        }
        std::cout << "  x^" << m.power << ": expected " << to_string(m.expected) << ", got " << to_string(m.got) << "\n";
      }
      if (f.band) {
        std::cout << "  residual valuations";
        for (const auto& v : r.residual_valuations) std::cout << " " << v.str();
        std::cout << "\n";
      }
    }
  }
  out["fixtures"] = reports;
  out["verified"] = all;
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact series solutions of linear operators by remainder-map Newton iteration"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Machine-readable output");
    sub->add_option("--digits", o.digits, "Working decimal digits for floating steps")->capture_default_str();
    sub->add_option("--params", o.params, "Bindings k=v,...");
  };
  auto solver_flags = [&](CLI::App* sub) {
    sub->add_option("--operator", o.op, "Operator text or @file")->required();
    sub->add_option("--divisor", o.divisor, "d | x | xd:LAMBDA | special-dc")->capture_default_str();
    sub->add_option("--order", o.order, "standard | dual | graded (inferred from the divisor)");
  };
  auto heun_flags = [&](CLI::App* sub) {
    sub->add_option("--variant", o.variant, "heun | heun-hat | confluent")->capture_default_str();
    sub->add_option("--a", o.a, "Singular point a")->capture_default_str();
    sub->add_option("--alpha", o.alpha)->required();
    sub->add_option("--beta", o.beta)->capture_default_str();
    sub->add_option("--gamma", o.gamma)->required();
    sub->add_option("--delta", o.delta);
    sub->add_option("--epsilon", o.epsilon);
  };

  auto* solve = app.add_subcommand("solve", "Newton iteration for a zero of the remainder map");
  common(solve);
  solver_flags(solve);
  solve->add_option("--pair", o.pair, "xd | adag: pair the operator is rewritten into")->capture_default_str();
  solve->add_option("--seed", o.seed, "Initial approximation")->capture_default_str();
  solve->add_option("--precision", o.precision, "Truncation order")->capture_default_str();

  auto* indicial = app.add_subcommand("indicial", "Point classification, indicial polynomial and radius bound");
  common(indicial);
  indicial->add_option("--operator", o.op, "Operator text or @file")->required();

  auto* divide = app.add_subcommand("divide", "Right division by a first-order operator");
  common(divide);
  solver_flags(divide);
  divide->add_option("--by", o.by, "Explicit divisor text (overrides --divisor)");

  auto* heun = app.add_subcommand("heun-eigen", "Remainder matrix and eigen data for the Heun family");
  common(heun);
  heun_flags(heun);
  heun->add_option("--degree", o.degree, "Invariant subspace degree");
  heun->add_option("--terms", o.terms, "Series identity order")->capture_default_str();

  auto* factor = app.add_subcommand("factor-check", "Exact factorization check for given q* and e values");
  common(factor);
  heun_flags(factor);
  factor->add_option("--qstar", o.qstar)->required();
  factor->add_option("--e", o.e_values, "Comma separated e values")->required();

  auto* identity = app.add_subcommand("identity-check", "Coefficientwise identity of two series descriptions");
  common(identity);
  identity->add_option("--lhs", o.lhs, "JSON series description or @file")->required();
  identity->add_option("--rhs", o.rhs, "JSON series description or @file")->required();
  identity->add_option("--terms", o.terms)->capture_default_str();

  auto* diff = app.add_subcommand("difference", "Difference realization of the Bessel series");
  common(diff);
  diff->add_option("--bessel", o.bessel, "Order n")->required();
  diff->add_option("--x", o.x, "Evaluation point");
  diff->add_option("--check-to", o.check_to, "Apply the Bessel operator on [0, N] and check it vanishes");

  auto* fixture = app.add_subcommand("fixture", "Run fixture files");
  common(fixture);
  fixture->add_option("files", o.fixtures, "Fixture JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Json out = base_json(name, o);
  PrecisionScope precision(o.digits);
  int code = kOk;
  try {
    if (name == "solve") code = cmd_solve(o, out);
    if (name == "indicial") code = cmd_indicial(o, out);
    if (name == "divide") code = cmd_divide(o, out);
    if (name == "heun-eigen") code = cmd_heun_eigen(o, out);
    if (name == "factor-check") code = cmd_factor_check(o, out);
    if (name == "identity-check") code = cmd_identity_check(o, out);
    if (name == "difference") code = cmd_difference(o, out);
    if (name == "fixture") code = cmd_fixture(o, out);
  } catch (const UsageError& e) {
    out["error"] = {{"kind", "usage"}, {"message", e.what()}};
    code = kUsage;
  } catch (const std::exception& e) {
    out["error"] = {{"kind", "domain"}, {"message", e.what()}};
    out["verified"] = false;
    code = kFailed;
  }
  if (o.json)
    std::cout << out.dump(2) << "\n";
  else if (out.contains("error"))
    std::cerr << "error: " << out["error"]["message"].get<std::string>() << "\n";
  return code;
}
