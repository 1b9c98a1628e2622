#include "dmod/adic.hpp"

#include <climits>

namespace dmod {

long Valuation::bound() const { return kind == Kind::Infinite ? LONG_MAX : value; }

std::string Valuation::str() const {
  switch (kind) {
    case Kind::Finite:
      return std::to_string(value);
    case Kind::AtLeast:
      return ">=" + std::to_string(value);
    case Kind::Infinite:
      return "inf";
  }
  return "?";
}

AdicSeries AdicSeries::from_poly(const QPoly& p, unsigned precision) {
  AdicSeries s(p.gen(), precision);
  for (size_t k = 0; k < p.size(); ++k) s.set(static_cast<unsigned>(k), p.coeffs()[k]);
  return s;
}

Rational AdicSeries::coeff(unsigned k) const {
  if (precision_ != 0 && k >= precision_) throw Error("coefficient beyond certified precision");
  auto it = c_.find(k);
  return it == c_.end() ? Rational(0) : it->second;
}

void AdicSeries::set(unsigned k, const Rational& v) {
  if (precision_ != 0 && k >= precision_) return;
  if (sgn(v) == 0)
    c_.erase(k);
  else
    c_[k] = v;
}

Valuation AdicSeries::valuation() const {
  if (!c_.empty()) return Valuation::finite(c_.begin()->first);
  return precision_ == 0 ? Valuation::infinite() : Valuation::at_least(precision_);
}

QPoly AdicSeries::to_poly() const {
  std::vector<Rational> c(c_.empty() ? 0 : c_.rbegin()->first + 1);
  for (const auto& [k, v] : c_) c[k] = v;
  return QPoly(std::move(c), gen_);
}

AdicSeries AdicSeries::truncate(unsigned n) const {
  unsigned p = precision_ == 0 ? n : std::min(n, precision_);
  AdicSeries out(gen_, p);
  for (const auto& [k, v] : c_)
    if (k < p) out.c_[k] = v;
  return out;
}

namespace {

void check_gen(const AdicSeries& a, const AdicSeries& b) {
  if (a.gen() != b.gen()) throw Error("series generator mismatch: " + a.gen() + " vs " + b.gen());
}

unsigned min_precision(unsigned a, unsigned b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return std::min(a, b);
}

}  // namespace

AdicSeries operator+(const AdicSeries& a, const AdicSeries& b) {
  check_gen(a, b);
  AdicSeries out(a.gen_, min_precision(a.precision_, b.precision_));
  for (const auto& [k, v] : a.c_) out.set(k, out.coeff_or_zero(k) + v);
  for (const auto& [k, v] : b.c_) out.set(k, out.coeff_or_zero(k) + v);
  return out;
}

AdicSeries operator-(const AdicSeries& a, const AdicSeries& b) {
  check_gen(a, b);
  AdicSeries out(a.gen_, min_precision(a.precision_, b.precision_));
  for (const auto& [k, v] : a.c_) out.set(k, out.coeff_or_zero(k) + v);
  for (const auto& [k, v] : b.c_) out.set(k, out.coeff_or_zero(k) - v);
  return out;
}

// (a + O(g^N)) (b + O(g^M)) is known below min(N + nu(b), M + nu(a)).
AdicSeries operator*(const AdicSeries& a, const AdicSeries& b) {
  check_gen(a, b);
  const long inf = LONG_MAX;
  auto add = [&](long x, long y) { return (x == inf || y == inf) ? inf : x + y; };
  long pa = a.precision_ == 0 ? inf : a.precision_, pb = b.precision_ == 0 ? inf : b.precision_;
  long p = std::min(add(pa, b.valuation().bound()), add(pb, a.valuation().bound()));
  AdicSeries out(a.gen_, p == inf ? 0u : static_cast<unsigned>(p));
  for (const auto& [i, x] : a.c_)
    for (const auto& [j, y] : b.c_) out.set(i + j, out.coeff_or_zero(i + j) + x * y);
  return out;
}

Valuation valuation(const QPoly& p) {
  int v = p.valuation();
  return v < 0 ? Valuation::infinite() : Valuation::finite(v);
}

Valuation valuation(const AdicSeries& s) { return s.valuation(); }

bool ultrametric_check(const QPoly& x, const QPoly& y, const QPoly& z) {
  long xy = valuation(x - y).bound(), yz = valuation(y - z).bound(), xz = valuation(x - z).bound();
  return xz >= std::min(xy, yz);
}

}  // namespace dmod
