#include "dmod/newton.hpp"

#include <algorithm>
#include <climits>

namespace dmod {

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::Ordinary:
      return "ordinary";
    case PointKind::RegularSingular:
      return "regular-singular";
    case PointKind::Other:
      return "other";
  }
  return "?";
}

bool IndicialData::non_resonant(const Rational& lambda) const {
  for (const auto& r : rational_roots) {
    Rational d = (r - lambda) / shift;
    if (d.get_den() == 1 && sgn(d) > 0) return false;
  }
  return true;
}

QWeyl doubly_confluent_divisor(const Rational& a, const Rational& b) {
  QWeyl k = QWeyl::term(1, 1, 2);
  k += QWeyl::term(b, 0, 1);
  k += QWeyl::term(-1, 1, 1);
  return k.plus_scalar(-a);
}

QWeyl doubly_confluent_operator(const Rational& a, const Rational& b, const Rational& c, const Rational& q) {
  QWeyl out = weyl_mul(QWeyl::raise(), doubly_confluent_divisor(a, b));
  out += QWeyl::term(c, 0, 1);
  return out.plus_scalar(q);
}

namespace {

QWeyl in_xd(const QWeyl& L) {
  if (L.pair() == xd_pair()) return L;
  if (L.pair() == dx_pair()) return swap_orientation(L);
  throw Error("operator must be given over the (X, D) pair");
}

const char* kNotImmediate = "remainder map not immediate at this configuration";

}  // namespace

RemainderMap::RemainderMap(const SolveConfig& cfg) : cfg_(cfg) {
  switch (cfg.K.kind) {
    case DivisorKind::Lower:
      if (cfg.spec.mode == OrderMode::Graded) throw Error("the lower-generator divisor needs standard or dual order");
      if (cfg.spec.mode == OrderMode::Dual)
        working_ = cfg.L.pair() == dx_pair() ? cfg.L : swap_orientation(in_xd(cfg.L));
      else
        working_ = cfg.L;
      divisor_op_ = QWeyl::lower(working_.pair());
      break;
    case DivisorKind::Graded: {
      if (cfg.spec.mode != OrderMode::Graded) throw Error("the G - lambda divisor needs graded order");
      left_factor_ = graded_defect(cfg.L);
      working_ = weyl_mul(QWeyl::raise(cfg.L.pair(), left_factor_), cfg.L);
      const GeneratorPair& p = working_.pair();
      divisor_op_ = weyl_mul(QWeyl::raise(p), QWeyl::lower(p)).plus_scalar(-cfg.K.lambda);
      break;
    }
    case DivisorKind::DoublyConfluent: {
      QWeyl L = in_xd(cfg.L);
      if (L != doubly_confluent_operator(cfg.K.a, cfg.K.b, cfg.K.c, cfg.K.q))
        throw Error("operator is not X K + c D + q for the given doubly confluent parameters");
      working_ = swap_orientation(L);
      divisor_op_ = doubly_confluent_divisor(cfg.K.a, cfg.K.b);
      break;
    }
  }
}

std::string RemainderMap::describe() const {
  switch (cfg_.K.kind) {
    case DivisorKind::Lower:
      return divisor_op_.str();
    case DivisorKind::Graded:
      return divisor_op_.str();
    case DivisorKind::DoublyConfluent:
      return divisor_op_.str();
  }
  return "?";
}

QPoly RemainderMap::compute_monomial(unsigned m) const {
  const GeneratorPair& p = working_.pair();
  switch (cfg_.K.kind) {
    case DivisorKind::Lower: {
      QWeyl f = weyl_mul(working_, QWeyl::raise(p, m));
      return divide_first_order(f, divisor_op_, OrderSpec::standard()).remainder.with_gen(p.raise);
    }
    case DivisorKind::Graded: {
      QWeyl f = weyl_mul(working_, QWeyl::raise(p, m));
      return divide_first_order(f, divisor_op_, OrderSpec::graded()).remainder.with_gen(p.raise);
    }
    case DivisorKind::DoublyConfluent: {
      // D^n -> c D^(n+1) + (n b + n(n-1) + q) D^n - n(a+n-1) D^(n-1), quotient X D^n - n D^(n-1)
      const auto& k = cfg_.K;
      const Rational n(m);
      std::vector<Rational> r(m + 2);
      r[m + 1] = k.c;
      r[m] = n * k.b + n * (n - 1) + k.q;
      if (m > 0) r[m - 1] = -n * (k.a + n - 1);
      QPoly rem(std::move(r), p.raise);
      QWeyl quotient = QWeyl::term(1, 1, m);
      if (m > 0) quotient += QWeyl::term(-n, 0, m - 1);
      QWeyl L = swap_orientation(working_);
      if (weyl_mul(L, QWeyl::lower(xd_pair(), m)) !=
          weyl_mul(quotient, divisor_op_) + QWeyl::from_lower_poly(rem, xd_pair()))
        throw Error("doubly confluent remainder failed re-multiplication check");
      return rem;
    }
  }
  throw Error("unknown divisor kind");
}

const QPoly& RemainderMap::monomial(unsigned m) {
  auto it = cache_.find(m);
  if (it == cache_.end()) it = cache_.emplace(m, compute_monomial(m)).first;
  return it->second;
}

QPoly RemainderMap::apply(const QPoly& s) {
  QPoly out({}, generator());
  for (size_t m = 0; m < s.size(); ++m)
    if (sgn(s.coeffs()[m]) != 0) out += monomial(static_cast<unsigned>(m)).scaled(s.coeffs()[m]);
  return out;
}

long RemainderMap::shift() {
  if (shift_) return *shift_;
  const unsigned span = std::max(8u, 2 * std::max(working_.max_lower(), working_.max_raise()) + 4);
  long best = LONG_MAX;
  for (unsigned m = 0; m <= span; ++m) {
    const QPoly& r = monomial(m);
    if (r.is_zero()) continue;
    best = std::min(best, static_cast<long>(r.valuation()) - static_cast<long>(m));
  }
  if (best == LONG_MAX) throw Error("remainder map vanishes on all sampled monomials");
  shift_ = best;
  return best;
}

Rational RemainderMap::tangent_coeff(unsigned m) {
  const long idx = static_cast<long>(m) + shift();
  if (idx < 0) return Rational(0);
  return monomial(m).coeff(static_cast<size_t>(idx));
}

QPoly RemainderMap::tangent_apply(const QPoly& s) {
  const long sh = shift();
  std::vector<Rational> out;
  for (size_t m = 0; m < s.size(); ++m) {
    if (sgn(s.coeffs()[m]) == 0) continue;
    const long idx = static_cast<long>(m) + sh;
    if (idx < 0) continue;
    if (out.size() <= static_cast<size_t>(idx)) out.resize(idx + 1);
    out[idx] += s.coeffs()[m] * tangent_coeff(static_cast<unsigned>(m));
  }
  return QPoly(std::move(out), generator());
}

QPoly RemainderMap::tangent_inverse(const QPoly& r, unsigned limit) {
  const long sh = shift();
  std::vector<Rational> out;
  for (size_t j = 0; j < r.size(); ++j) {
    if (sgn(r.coeffs()[j]) == 0) continue;
    const long m = static_cast<long>(j) - sh;
    if (m < 0) throw Error(kNotImmediate);
    if (m >= static_cast<long>(limit)) continue;
    Rational t = tangent_coeff(static_cast<unsigned>(m));
    if (sgn(t) == 0) {
      if (cfg_.K.kind == DivisorKind::Graded) throw Error("resonant root, double-root case out of scope");
      throw Error(kNotImmediate);
    }
    if (out.size() <= static_cast<size_t>(m)) out.resize(m + 1);
    out[m] = r.coeffs()[j] / t;
  }
  return QPoly(std::move(out), generator());
}

QPoly RemainderMap::verified_apply(const QPoly& s) {
  const GeneratorPair& p = working_.pair();
  QPoly r;
  if (cfg_.K.kind == DivisorKind::DoublyConfluent) {
    QWeyl f = weyl_mul(swap_orientation(working_), QWeyl::from_lower_poly(s.with_gen("D"), xd_pair()));
    r = divide_exact_first_order(f, divisor_op_, OrderSpec::dual()).remainder.with_gen(p.raise);
  } else {
    QWeyl f = weyl_mul(working_, QWeyl::from_raise_poly(s, p));
    OrderSpec spec = cfg_.K.kind == DivisorKind::Graded ? OrderSpec::graded() : OrderSpec::standard();
    r = divide_first_order(f, divisor_op_, spec).remainder.with_gen(p.raise);
  }
  if (r != apply(s)) throw Error("remainder map disagrees with direct division");
  return r;
}

QPoly remainder_map(const SolveConfig& cfg, const QPoly& s) { return RemainderMap(cfg).apply(s); }
QPoly tangential_apply(const SolveConfig& cfg, const QPoly& s) { return RemainderMap(cfg).tangent_apply(s); }
QPoly tangential_inverse(const SolveConfig& cfg, const QPoly& r) {
  return RemainderMap(cfg).tangent_inverse(r, cfg.precision);
}

SolveResult newton_iterate(const SolveConfig& cfg) {
  if (cfg.seed.is_zero()) throw Error("seed must be nonzero");
  if (cfg.precision == 0) throw Error("precision must be positive");
  RemainderMap phi(cfg);
  const unsigned N = cfg.precision;
  const long sh = phi.shift();
  const long target = static_cast<long>(N) + sh;
  const unsigned cap =
      cfg.max_iterations > 0 ? cfg.max_iterations : N + static_cast<unsigned>(sh < 0 ? -sh : sh) + 8;

  SolveResult out;
  out.divisor = phi.describe();
  out.tangent_shift = sh;
  out.left_factor = cfg.K.kind == DivisorKind::Graded ? graded_defect(cfg.L) : 0;
  if (cfg.K.kind == DivisorKind::Graded) out.exponent = cfg.K.lambda;

  QPoly s = cfg.seed.with_gen(phi.generator()).truncated(N);
  if (s.is_zero()) throw Error("seed vanishes below the requested precision");
  long previous = LONG_MIN;
  unsigned stalls = 0;
  for (unsigned it = 0;; ++it) {
    QPoly r = phi.apply(s);
    Valuation v = valuation(r);
    out.residual_valuations.push_back(v);
    if (r.is_zero() || v.bound() >= target) {
      out.converged = true;
      break;
    }
    if (it >= cap) break;
    if (v.bound() <= previous) {
      if (++stalls >= 2) throw Error(kNotImmediate);
    } else {
      stalls = 0;
    }
    previous = v.bound();
    s = (s - phi.tangent_inverse(r, N)).truncated(N);
  }
  if (out.converged) {
    QPoly r = phi.verified_apply(s);
    if (!r.is_zero() && valuation(r).bound() < target) throw Error("final residual check failed");
  }
  out.series = AdicSeries::from_poly(s, N);
  return out;
}

SolveResult solve_ordinary(const QWeyl& L, const QPoly& seed, unsigned N) {
  if (classify_point(L) != PointKind::Ordinary) throw Error("the origin is not an ordinary point");
  return newton_iterate({L, Divisor::lower(), OrderSpec::standard(), seed, N, 0});
}

SolveResult solve_frobenius(const QWeyl& L, const Rational& lambda, unsigned N) {
  IndicialData ind = indicial_polynomial(L);
  if (sgn(ind.polynomial.eval(lambda)) != 0) throw Error("exponent is not a root of the indicial polynomial");
  if (!ind.non_resonant(lambda)) throw Error("resonant root, double-root case out of scope");
  QPoly seed = QPoly::constant(Rational(1), L.pair().raise);
  return newton_iterate({L, Divisor::graded(lambda), OrderSpec::graded(), seed, N, 0});
}

SolveResult solve_dual(const QWeyl& L, const QPoly& seed, unsigned N) {
  return newton_iterate({L, Divisor::lower(), OrderSpec::dual(), seed, N, 0});
}

SolveResult solve_doubly_confluent(const QWeyl& L, const Divisor& K, const QPoly& seed, unsigned N) {
  if (K.kind != DivisorKind::DoublyConfluent) throw Error("expected a doubly confluent divisor");
  return newton_iterate({L, K, OrderSpec::dual(), seed, N, 0});
}

PointKind classify_point(const QWeyl& L, OrderSpec spec) {
  if (L.is_zero()) throw Error("zero operator");
  QWeyl op = L;
  if (spec.mode == OrderMode::Dual) op = swap_orientation(L);
  const unsigned n = op.max_lower();
  if (sgn(op.lower_coeff(n).coeff(0)) != 0) return PointKind::Ordinary;
  const unsigned k = graded_defect(op);
  QWeyl lifted = weyl_mul(QWeyl::raise(op.pair(), k), op);
  if (sgn(lifted.coeff(n, n)) != 0) return PointKind::RegularSingular;
  return PointKind::Other;
}

IndicialData indicial_polynomial(const QWeyl& L, unsigned digits) {
  if (L.is_zero()) throw Error("zero operator");
  IndicialData out;
  out.left_factor = graded_defect(L);
  out.shift = L.pair().c;
  QWeyl lifted = weyl_mul(QWeyl::raise(L.pair(), out.left_factor), L);
  QPoly poly({}, "lambda");
  for (const auto& [key, v] : lifted.terms())
    if (key.first == key.second) poly += grade_product(key.second, out.shift).with_gen("lambda").scaled(v);
  if (poly.is_zero()) throw Error("indicial polynomial vanishes identically");
  out.polynomial = poly;
  if (poly.degree() >= 1) {
    out.roots = poly_roots(poly, digits);
    out.rational_roots = rational_roots(poly);
  }
  return out;
}

namespace {

// Drops the factor X^v so that the origin is excluded from the root set.
QPoly strip_origin(const QPoly& p) {
  int v = p.valuation();
  if (v <= 0) return p;
  return QPoly(std::vector<Rational>(p.coeffs().begin() + v, p.coeffs().end()), p.gen());
}

}  // namespace

std::optional<BigFloat> radius_bound(const QWeyl& L, unsigned digits) {
  if (L.is_zero()) throw Error("zero operator");
  const unsigned n = L.max_lower();
  QPoly p;
  switch (classify_point(L)) {
    case PointKind::Ordinary:
      p = L.lower_coeff(n);
      break;
    case PointKind::RegularSingular: {
      QWeyl lifted = weyl_mul(QWeyl::raise(L.pair(), graded_defect(L)), L);
      p = strip_origin(lifted.lower_coeff(n));
      break;
    }
    case PointKind::Other:
      p = strip_origin(L.lower_coeff(n));
      break;
  }
  if (p.degree() < 1) return std::nullopt;
  PrecisionScope scope(digits);
  std::optional<BigFloat> best;
  for (const auto& r : poly_roots(p, digits)) {
    BigFloat m = abs(r);
    if (!best || m < *best) best = m;
  }
  return best;
}

}  // namespace dmod
