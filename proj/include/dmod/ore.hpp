#pragma once

#include <vector>

#include "dmod/poly.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

inline RationalFunction coeff_scale(const RationalFunction& c, const Rational& s) {
  return c * RationalFunction(s);
}
template <class F>
Poly<F> coeff_scale(const Poly<F>& c, const Rational& s) {
  return c.scaled(FieldTraits<F>::from(s));
}
inline RationalFunction coeff_zero(const RationalFunction*) { return RationalFunction(); }
template <class F>
Poly<F> coeff_zero(const Poly<F>*) {
  return Poly<F>({}, "x");
}

// Operator sum c_k(x) D^k with the Leibniz rule D*f = f*D + f'.
template <class C>
class OreOp {
 public:
  OreOp() = default;
  explicit OreOp(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }
  C coeff(size_t k) const { return k < c_.size() ? c_[k] : coeff_zero(static_cast<const C*>(nullptr)); }
  const C& lead() const {
    if (c_.empty()) throw Error("leading coefficient of zero operator");
    return c_.back();
  }

  OreOp& operator+=(const OreOp& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), coeff_zero(static_cast<const C*>(nullptr)));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
    trim();
    return *this;
  }
  OreOp& operator-=(const OreOp& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), coeff_zero(static_cast<const C*>(nullptr)));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
    trim();
    return *this;
  }
  friend OreOp operator+(OreOp a, const OreOp& b) { return a += b; }
  friend OreOp operator-(OreOp a, const OreOp& b) { return a -= b; }
  friend bool operator==(const OreOp& a, const OreOp& b) { return a.c_ == b.c_; }

  // Left multiplication by a function acts coefficient-wise.
  OreOp left_scaled(const C& f) const {
    std::vector<C> out;
    out.reserve(c_.size());
    for (const auto& v : c_) out.push_back(f * v);
    return OreOp(std::move(out));
  }

  static OreOp monomial(const C& f, size_t k) {
    std::vector<C> c(k + 1, coeff_zero(static_cast<const C*>(nullptr)));
    c[k] = f;
    return OreOp(std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<C> c_;
};

using RatOre = OreOp<RationalFunction>;

template <class C>
OreOp<C> ore_mul(const OreOp<C>& a, const OreOp<C>& b) {
  if (a.is_zero() || b.is_zero()) return OreOp<C>();
  std::vector<C> out(a.coeffs().size() + b.coeffs().size() - 1, coeff_zero(static_cast<const C*>(nullptr)));
  for (size_t j = 0; j < b.coeffs().size(); ++j) {
    if (b.coeffs()[j].is_zero()) continue;
    // D^i * b_j = sum_k C(i,k) b_j^(k) D^(i-k)
    std::vector<C> derivs{b.coeffs()[j]};
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
      if (a.coeffs()[i].is_zero()) continue;
      while (derivs.size() <= i) derivs.push_back(derivs.back().derivative());
      for (size_t k = 0; k <= i; ++k) {
        if (derivs[k].is_zero()) continue;
        C term = a.coeffs()[i] * coeff_scale(derivs[k], Rational(binomial(i, k)));
        out[i - k + j] = out[i - k + j] + term;
      }
    }
  }
  return OreOp<C>(std::move(out));
}

struct OreDivision {
  RatOre quotient;
  RatOre remainder;
};

// l = q*m + r with deg r < deg m, exact over Q(x).
OreDivision ore_right_divide(const RatOre& l, const RatOre& m);

template <class F>
struct PseudoRemainder {
  OreOp<Poly<F>> remainder;
  OreOp<Poly<F>> scaled_dividend;  // lead(m)^steps * l
  unsigned steps = 0;
};

// Fraction-free right pseudo-division: each step left-multiplies by lead(m).
template <class F>
PseudoRemainder<F> ore_pseudo_remainder(const OreOp<Poly<F>>& l, const OreOp<Poly<F>>& m) {
  if (m.is_zero()) throw Error("division by zero operator");
  PseudoRemainder<F> out;
  out.remainder = l;
  out.scaled_dividend = l;
  const Poly<F>& lm = m.lead();
  while (!out.remainder.is_zero() && out.remainder.degree() >= m.degree()) {
    const size_t shift = out.remainder.degree() - m.degree();
    Poly<F> lr = out.remainder.lead();
    out.remainder = out.remainder.left_scaled(lm) - ore_mul(OreOp<Poly<F>>::monomial(lr, shift), m);
    out.scaled_dividend = out.scaled_dividend.left_scaled(lm);
    ++out.steps;
  }
  return out;
}

// Largest coefficient magnitude across all polynomial coefficients.
template <class F>
BigFloat ore_norm(const OreOp<Poly<F>>& op) {
  BigFloat out = 0;
  for (const auto& p : op.coeffs())
    for (const auto& v : p.coeffs()) out = std::max(out, BigFloat(FieldTraits<F>::magnitude(v)));
  return out;
}

RatOre weyl_to_ore(const QWeyl& op);

template <class F>
OreOp<Poly<F>> weyl_to_ore_poly(const WeylOp<F>& op) {
  if (op.pair() != xd_pair()) throw Error("Ore transcription needs the (X, D) pair");
  std::vector<Poly<F>> c(op.max_lower() + 1, Poly<F>({}, "x"));
  for (unsigned j = 0; j <= op.max_lower(); ++j) c[j] = op.lower_coeff(j).with_gen("x");
  return OreOp<Poly<F>>(std::move(c));
}

// Action on Q[x] through the differential realization.
RationalFunction ore_apply(const RatOre& op, const QPoly& p);

std::string to_string(const RatOre& op);

}  // namespace dmod
