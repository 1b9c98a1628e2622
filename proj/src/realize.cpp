#include "dmod/realize.hpp"

#include <algorithm>

namespace dmod {

const Rational& FunctionTable::at(long x) const {
  if (x < lo || x > hi()) throw Error("point " + std::to_string(x) + " outside the table");
  return values[static_cast<size_t>(x - lo)];
}

FunctionTable FunctionTable::restricted(long from, long to) const {
  FunctionTable out;
  out.lo = from;
  for (long x = from; x <= to; ++x) out.values.push_back(at(x));
  return out;
}

Rational falling_factorial(const Rational& x, unsigned d) {
  Rational out = 1;
  for (unsigned k = 0; k < d; ++k) out *= x - k;
  return out;
}

Rational FallingSeries::eval(long x) const {
  Rational out = 0;
  for (const auto& [d, c] : terms_) {
    if (x >= 0 && static_cast<long>(d) > x) break;
    out += c * falling_factorial(Rational(x), d);
  }
  return out;
}

FunctionTable FallingSeries::table(long lo, long hi) const {
  FunctionTable t;
  t.lo = lo;
  for (long x = lo; x <= hi; ++x) t.values.push_back(eval(x));
  return t;
}

QPoly realize_differential(const AdicSeries& s) { return s.to_poly().with_gen("x"); }

FallingSeries realize_difference(const AdicSeries& s) { return FallingSeries(s.coeffs()); }

namespace {

FunctionTable difference(const FunctionTable& f) {
  if (f.values.size() < 2) throw Error("table too narrow for a difference step");
  FunctionTable g;
  g.lo = f.lo;
  for (size_t i = 0; i + 1 < f.values.size(); ++i) g.values.push_back(f.values[i + 1] - f.values[i]);
  return g;
}

// (X g)(x) = x g(x-1); at x = 0 the factor vanishes, so 0 stays in the domain.
FunctionTable shift_multiply(const FunctionTable& g) {
  FunctionTable h;
  h.lo = g.lo + 1;
  for (long x = h.lo; x <= g.hi() + 1; ++x) h.values.push_back(Rational(x) * g.at(x - 1));
  if (g.lo == 0) {
    h.lo = 0;
    h.values.insert(h.values.begin(), Rational(0));
  }
  return h;
}

}  // namespace

FunctionTable apply_difference(const QWeyl& op, const FunctionTable& f) {
  if (op.pair() != xd_pair()) throw Error("difference realization needs the (X, D) pair");
  if (f.empty()) throw Error("empty function table");
  std::vector<FunctionTable> diffs{f};
  std::vector<std::pair<FunctionTable, Rational>> parts;
  for (const auto& [key, c] : op.terms()) {
    auto [i, j] = key;
    while (diffs.size() <= j) diffs.push_back(difference(diffs.back()));
    FunctionTable t = diffs[j];
    for (unsigned k = 0; k < i; ++k) t = shift_multiply(t);
    parts.emplace_back(std::move(t), c);
  }
  if (parts.empty()) {
    FunctionTable zero = f;
    std::fill(zero.values.begin(), zero.values.end(), Rational(0));
    return zero;
  }
  long lo = parts.front().first.lo, hi = parts.front().first.hi();
  for (const auto& [t, c] : parts) {
    lo = std::max(lo, t.lo);
    hi = std::min(hi, t.hi());
  }
  if (lo > hi) throw Error("function table too narrow for this operator");
  FunctionTable out;
  out.lo = lo;
  out.values.assign(static_cast<size_t>(hi - lo + 1), Rational(0));
  for (const auto& [t, c] : parts)
    for (long x = lo; x <= hi; ++x) out.values[static_cast<size_t>(x - lo)] += c * t.at(x);
  return out;
}

QWeyl bessel_operator(const Rational& nu) {
  QWeyl euler = QWeyl::term(1, 1, 1);
  return weyl_mul(euler, euler) + QWeyl::term(1, 2, 0).plus_scalar(-nu * nu);
}

namespace {

Rational bessel_coeff(unsigned n, unsigned k) {
  Integer two;
  mpz_ui_pow_ui(two.get_mpz_t(), 2, n + 2 * k);
  return Rational(k % 2 ? -1 : 1) / Rational(factorial(n + k) * factorial(k) * two);
}

}  // namespace

AdicSeries bessel_series(unsigned n, unsigned precision) {
  AdicSeries s("X", precision);
  for (unsigned k = 0; n + 2 * k < precision; ++k) s.set(n + 2 * k, bessel_coeff(n, k));
  return s;
}

Rational difference_bessel(unsigned n, long x) {
  if (x < 0) throw Error("difference Bessel values are defined here for integer x >= 0");
  Rational out = 0;
  for (unsigned k = 0; static_cast<long>(n + 2 * k) <= x; ++k)
    out += bessel_coeff(n, k) * falling_factorial(Rational(x), n + 2 * k);
  return out;
}

}  // namespace dmod
