#include "dmod/fixture.hpp"

#include <cctype>
#include <fstream>

namespace dmod {

namespace {

class ClosedForm {
 public:
  ClosedForm(const std::string& text, const Bindings& b) : s_(text), b_(b) {}

  Rational run() {
    Rational v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("closed form '" + s_ + "' at byte " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Rational sum() {
    Rational v = product();
    for (;;) {
      if (accept('+'))
        v += product();
      else if (accept('-'))
        v -= product();
      else
        return v;
    }
  }

  Rational product() {
    Rational v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        Rational d = unary();
        if (sgn(d) == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Rational unary() {
    if (accept('-')) return -unary();
    return power_expr();
  }

  // Exponents bind tighter than unary minus: -2^2 = -4.
  Rational power_expr() {
    Rational base = atom();
    if (!accept('^')) return base;
    Rational e = accept('-') ? Rational(-power_expr()) : power_expr();
    long n = to_count(e, true);
    if (n < 0) {
      if (sgn(base) == 0) fail("zero to a negative power");
      return 1 / power(base, static_cast<unsigned>(-n));
    }
    return power(base, static_cast<unsigned>(n));
  }

  long to_count(const Rational& v, bool allow_negative) const {
    if (v.get_den() != 1 || !v.get_num().fits_slong_p()) fail("expected an integer, got " + to_string(v));
    long n = v.get_num().get_si();
    if (n < 0 && !allow_negative) fail("expected a nonnegative integer, got " + to_string(v));
    return n;
  }

  std::vector<Rational> args() {
    std::vector<Rational> out;
    if (!accept('(')) fail("expected '('");
    out.push_back(sum());
    while (accept(',')) out.push_back(sum());
    if (!accept(')')) fail("expected ')'");
    return out;
  }

  Rational atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Rational v = sum();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Rational(Integer(s_.substr(start, pos_ - start)));
    }
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') fail("unexpected '" + std::string(1, c) + "'");
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "poch") {
      auto a = args();
      if (a.size() != 2) fail("poch takes two arguments");
      return pochhammer(a[0], static_cast<unsigned>(to_count(a[1], false)));
    }
    if (name == "fact") {
      auto a = args();
      if (a.size() != 1) fail("fact takes one argument");
      return Rational(factorial(static_cast<unsigned>(to_count(a[0], false))));
    }
    if (name == "binom") {
      auto a = args();
      if (a.size() != 2) fail("binom takes two arguments");
      return Rational(binomial(static_cast<unsigned>(to_count(a[0], false)), static_cast<unsigned>(to_count(a[1], false))));
    }
    auto it = b_.find(name);
    if (it == b_.end()) fail("unbound identifier '" + name + "'");
    return it->second;
  }

  const std::string& s_;
  const Bindings& b_;
  size_t pos_ = 0;
};

QWeyl in_pair(const QWeyl& op, const std::string& pair) {
  if (pair == "xd") return op;
  if (pair == "adag") return change_basis(op, adag_pair(), xd_to_adag());
  throw Error("unknown generator pair '" + pair + "' (expected xd or adag)");
}

}  // namespace

Rational eval_closed_form(const std::string& text, const Bindings& bindings) {
  return ClosedForm(text, bindings).run();
}

QPoly seed_polynomial(const std::string& text, const Bindings& bindings, const GeneratorPair& working) {
  QWeyl s = parse_operator(text, bindings);
  if (working == dx_pair())
    s = swap_orientation(s);
  else if (working == adag_pair())
    s = change_basis(s, adag_pair(), xd_to_adag());
  else if (working != xd_pair())
    throw Error("seed cannot be expressed over the pair (" + working.raise + ", " + working.lower + ")");
  std::vector<Rational> c;
  for (const auto& [k, v] : s.terms()) {
    if (k.second != 0) throw Error("seed '" + text + "' must be a polynomial in " + working.raise);
    if (c.size() <= k.first) c.resize(k.first + 1);
    c[k.first] = v;
  }
  return QPoly(c, working.raise);
}

SolveConfig build_config(const SolveRequest& req) {
  SolveConfig cfg;
  cfg.L = in_pair(parse_operator(req.op, req.bindings), req.pair);
  cfg.precision = req.precision;
  const std::string& d = req.divisor;
  if (req.order == "standard") {
    cfg.spec = OrderSpec::standard();
  } else if (req.order == "dual") {
    cfg.spec = OrderSpec::dual();
  } else if (req.order == "graded") {
    cfg.spec = OrderSpec::graded();
  } else {
    throw Error("unknown order '" + req.order + "' (expected standard, dual or graded)");
  }

  GeneratorPair working = cfg.L.pair();
  if (d == "d") {
    if (cfg.spec.mode != OrderMode::Standard) throw Error("divisor d needs the standard order");
    cfg.K = Divisor::lower();
  } else if (d == "x") {
    if (cfg.spec.mode != OrderMode::Dual) throw Error("divisor x needs the dual order");
    if (req.pair != "xd") throw Error("divisor x is only defined over the (X, D) pair");
    cfg.K = Divisor::lower();
    working = dx_pair();
  } else if (d.rfind("xd:", 0) == 0) {
    if (cfg.spec.mode != OrderMode::Graded) throw Error("divisor xd:LAMBDA needs the graded order");
    auto it = req.bindings.find(d.substr(3));
    cfg.K = Divisor::graded(it != req.bindings.end() ? it->second : parse_rational(d.substr(3)));
  } else if (d == "special-dc") {
    if (cfg.spec.mode != OrderMode::Dual) throw Error("divisor special-dc needs the dual order");
    if (req.pair != "xd") throw Error("divisor special-dc is only defined over the (X, D) pair");
    for (const char* name : {"a", "b", "c", "q"})
      if (!req.bindings.count(name)) throw Error(std::string("divisor special-dc needs the binding ") + name);
    const auto& b = req.bindings;
    cfg.K = Divisor::doubly_confluent(b.at("a"), b.at("b"), b.at("c"), b.at("q"));
    working = dx_pair();
  } else {
    throw Error("unknown divisor '" + d + "' (expected d, x, xd:LAMBDA or special-dc)");
  }
  cfg.seed = seed_polynomial(req.seed, req.bindings, working);
  return cfg;
}

Fixture fixture_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Fixture f;
  f.name = j.at("name").get<std::string>();
  f.note = j.value("note", std::string());
  if (j.contains("operator_file")) {
    std::ifstream in(base_dir / j.at("operator_file").get<std::string>());
    if (!in) throw Error("cannot read operator file " + j.at("operator_file").get<std::string>());
    f.request.op.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    f.request.op = j.at("operator").get<std::string>();
  }
  if (j.contains("bindings"))
    for (const auto& [k, v] : j.at("bindings").items()) f.request.bindings[k] = rational_from_json(v);
  f.request.divisor = j.value("divisor", std::string("d"));
  f.request.order = j.value("order", std::string("standard"));
  f.request.pair = j.value("pair", std::string("xd"));
  f.request.seed = j.value("seed", std::string("1"));
  f.request.precision = j.at("precision").get<unsigned>();
  if (j.contains("oracle")) {
    const Json& o = j.at("oracle");
    f.oracle = o.at("coefficient").get<std::string>();
    f.power = o.value("power", std::string("k"));
    f.terms = o.at("terms").get<unsigned>();
  }
  if (j.contains("band")) {
    f.band = true;
    f.iterations = j.at("band").at("iterations").get<unsigned>();
  }
  if (f.oracle.empty() == !f.band) throw Error("fixture " + f.name + " needs exactly one of oracle and band");
  return f;
}

Fixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read fixture " + path.string());
  return fixture_from_json(Json::parse(in), path.parent_path());
}

FixtureReport run_fixture(const Fixture& f) {
  FixtureReport rep;
  rep.name = f.name;
  try {
    SolveConfig cfg = build_config(f.request);
    if (f.band) {
      cfg.max_iterations = f.iterations;
      SolveResult r = newton_iterate(cfg);
      rep.residual_valuations = r.residual_valuations;
      rep.passed = r.residual_valuations.size() >= f.iterations;
      for (size_t n = 0; n < r.residual_valuations.size(); ++n) {
        const Valuation& v = r.residual_valuations[n];
        const long lo = static_cast<long>(n) + 1, hi = 2 * static_cast<long>(n) + 2;
        if (!v.is_finite() || v.value < lo || v.value > hi) {
          rep.passed = false;
          rep.error = "valuation " + v.str() + " at iterate " + std::to_string(n) + " is outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]";
          break;
        }
      }
      return rep;
    }

    SolveResult r = newton_iterate(cfg);
    rep.residual_valuations = r.residual_valuations;
    if (!r.converged) {
      rep.error = "solver did not reach the requested precision";
      return rep;
    }
    std::map<unsigned, Rational> expected;
    Bindings b = f.request.bindings;
    for (unsigned k = 0; k < f.terms; ++k) {
      b["k"] = k;
      Rational p = eval_closed_form(f.power, b);
      if (p.get_den() != 1 || sgn(p) < 0) throw Error("power " + to_string(p) + " is not a nonnegative integer");
      unsigned pw = static_cast<unsigned>(p.get_num().get_ui());
      if (pw >= f.request.precision) throw Error("oracle power " + std::to_string(pw) + " exceeds the precision");
      expected[pw] = eval_closed_form(f.oracle, b);
    }
    // Every power below the precision is compared; powers outside the oracle must vanish.
    for (unsigned pw = 0; pw < f.request.precision; ++pw) {
      auto it = expected.find(pw);
      Rational want = it == expected.end() ? Rational(0) : it->second;
      Rational got = r.series.coeff(pw);
      if (want != got) rep.mismatches.push_back({pw, want, got});
    }
    rep.passed = rep.mismatches.empty();
  } catch (const Error& e) {
    rep.passed = false;
    rep.error = e.what();
  }
  return rep;
}

Json report_to_json(const FixtureReport& r) {
  Json mism = Json::array();
  for (const auto& m : r.mismatches)
    mism.push_back({{"power", m.power}, {"expected", rational_to_json(m.expected)}, {"got", rational_to_json(m.got)}});
  Json vals = Json::array();
  for (const auto& v : r.residual_valuations) vals.push_back(valuation_to_json(v));
  Json out = {{"name", r.name}, {"passed", r.passed}, {"mismatches", mism}, {"residual_valuations", vals}};
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

}  // namespace dmod
