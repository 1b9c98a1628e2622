#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmod/scalar.hpp"

namespace dmod {

// Dense univariate polynomial, lowest degree first, no trailing zeros.
template <class F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<F> coeffs, std::string gen = "x") : c_(std::move(coeffs)), gen_(std::move(gen)) { trim(); }
  Poly(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const F& v, std::string gen = "x") { return Poly(std::vector<F>{v}, std::move(gen)); }
  static Poly monomial(const F& v, size_t k, std::string gen = "x") {
    std::vector<F> c(k + 1, FieldTraits<F>::from(Rational(0)));
    c[k] = v;
    return Poly(std::move(c), std::move(gen));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  size_t size() const { return c_.size(); }
  const std::vector<F>& coeffs() const { return c_; }
  const std::string& gen() const { return gen_; }
  Poly with_gen(std::string g) const { return Poly(c_, std::move(g)); }

  F coeff(size_t k) const { return k < c_.size() ? c_[k] : FieldTraits<F>::from(Rational(0)); }
  const F& lead() const {
    if (c_.empty()) throw Error("leading coefficient of zero polynomial");
    return c_.back();
  }
  int valuation() const {
    for (size_t k = 0; k < c_.size(); ++k)
      if (!dmod::is_zero(c_[k])) return static_cast<int>(k);
    return -1;
  }

  F eval(const F& x) const {
    F acc = FieldTraits<F>::from(Rational(0));
    for (size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly({}, gen_);
    std::vector<F> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * FieldTraits<F>::from(Rational(static_cast<long>(k)));
    return Poly(std::move(d), gen_);
  }

  Poly monic() const {
    if (c_.empty()) return *this;
    F inv = FieldTraits<F>::from(Rational(1)) / c_.back();
    return scaled(inv);
  }

  Poly scaled(const F& s) const {
    std::vector<F> out = c_;
    for (auto& v : out) v = v * s;
    return Poly(std::move(out), gen_);
  }

  Poly truncated(size_t n) const {
    std::vector<F> out(c_.begin(), c_.begin() + std::min(n, c_.size()));
    return Poly(std::move(out), gen_);
  }

  // Shift all exponents by k (multiply by x^k).
  Poly shifted(size_t k) const {
    if (c_.empty()) return *this;
    std::vector<F> out(k, FieldTraits<F>::from(Rational(0)));
    out.insert(out.end(), c_.begin(), c_.end());
    return Poly(std::move(out), gen_);
  }

  Poly operator-() const { return scaled(FieldTraits<F>::from(Rational(-1))); }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), FieldTraits<F>::from(Rational(0)));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), FieldTraits<F>::from(Rational(0)));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly({}, a.gen_);
    std::vector<F> out(a.c_.size() + b.c_.size() - 1, FieldTraits<F>::from(Rational(0)));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (dmod::is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out), a.gen_);
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly compose(const Poly& inner) const {
    Poly acc({}, gen_);
    for (size_t k = c_.size(); k-- > 0;) acc = acc * inner + Poly::constant(c_[k], gen_);
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && dmod::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<F> c_;
  std::string gen_ = "x";
};

using QPoly = Poly<Rational>;
using CPoly = Poly<Complex>;

template <class F>
std::pair<Poly<F>, Poly<F>> divrem(const Poly<F>& a, const Poly<F>& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<F> rem = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {Poly<F>({}, a.gen()), a};
  std::vector<F> quo(a.degree() - db + 1, FieldTraits<F>::from(Rational(0)));
  const F& lb = b.lead();
  for (int k = a.degree() - db; k >= 0; --k) {
    F t = rem[k + db] / lb;
    quo[k] = t;
    if (is_zero(t)) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] = rem[k + j] - t * b.coeffs()[j];
  }
  rem.resize(db);
  return {Poly<F>(std::move(quo), a.gen()), Poly<F>(std::move(rem), a.gen())};
}

// Monic gcd; gcd(0, 0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class F>
Poly<F> pow(const Poly<F>& p, unsigned e) {
  Poly<F> out = Poly<F>::constant(FieldTraits<F>::from(Rational(1)), p.gen());
  for (unsigned i = 0; i < e; ++i) out = out * p;
  return out;
}

template <class F>
Poly<F> linear(const F& c0, const F& c1, std::string gen = "x") {
  return Poly<F>(std::vector<F>{c0, c1}, std::move(gen));
}

template <class F>
Poly<Complex> to_complex(const Poly<F>& p) {
  std::vector<Complex> c;
  c.reserve(p.size());
  for (const auto& v : p.coeffs()) {
    if constexpr (std::is_same_v<F, Rational>)
      c.emplace_back(v);
    else
      c.push_back(v);
  }
  return Poly<Complex>(std::move(c), p.gen());
}

std::string to_string(const QPoly& p);

// Square-free decomposition: pairs (factor, multiplicity), factors monic.
std::vector<std::pair<QPoly, unsigned>> square_free(const QPoly& p);

// Numeric roots with multiplicity, Durand-Kerner on square-free parts.
std::vector<Complex> poly_roots(const QPoly& p, unsigned digits);
std::vector<Complex> poly_roots(const CPoly& p, unsigned digits);

// Continued-fraction reconstruction; empty if no small-height candidate fits.
std::optional<Rational> reconstruct_rational(const BigFloat& x, unsigned digits);

// Exact rational roots recovered from numeric roots and checked by evaluation.
std::vector<Rational> rational_roots(const QPoly& p, unsigned digits = 60);

// Numerator/denominator pair over Q with monic, coprime denominator.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(QPoly::constant(Rational(1))) {}
  RationalFunction(QPoly num) : num_(std::move(num)), den_(QPoly::constant(Rational(1))) {}
  RationalFunction(QPoly num, QPoly den);
  RationalFunction(const Rational& c) : RationalFunction(QPoly::constant(c)) {}

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  RationalFunction derivative() const;
  Rational eval(const Rational& x) const;

  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const;

 private:
  QPoly num_, den_;
};

}  // namespace dmod
