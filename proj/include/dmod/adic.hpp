#pragma once

#include <map>
#include <string>

#include "dmod/poly.hpp"

namespace dmod {

// Exact valuation, a certified lower bound for a truncated zero, or infinity.
struct Valuation {
  enum class Kind { Finite, AtLeast, Infinite };
  Kind kind = Kind::Infinite;
  long value = 0;

  static Valuation finite(long v) { return {Kind::Finite, v}; }
  static Valuation at_least(long v) { return {Kind::AtLeast, v}; }
  static Valuation infinite() { return {Kind::Infinite, 0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  // Lower bound usable in comparisons; infinity maps to LONG_MAX.
  long bound() const;
  std::string str() const;
  friend bool operator==(const Valuation& a, const Valuation& b) { return a.kind == b.kind && a.value == b.value; }
};

// Truncated series sum c_k g^k, k < precision; precision 0 means exact.
class AdicSeries {
 public:
  AdicSeries() = default;
  AdicSeries(std::string gen, unsigned precision) : gen_(std::move(gen)), precision_(precision) {}
  static AdicSeries from_poly(const QPoly& p, unsigned precision);

  const std::string& gen() const { return gen_; }
  unsigned precision() const { return precision_; }
  bool exact() const { return precision_ == 0; }
  const std::map<unsigned, Rational>& coeffs() const { return c_; }

  Rational coeff(unsigned k) const;
  void set(unsigned k, const Rational& v);
  Valuation valuation() const;
  QPoly to_poly() const;

  AdicSeries truncate(unsigned n) const;
  friend AdicSeries operator+(const AdicSeries& a, const AdicSeries& b);
  friend AdicSeries operator-(const AdicSeries& a, const AdicSeries& b);
  friend AdicSeries operator*(const AdicSeries& a, const AdicSeries& b);
  friend bool operator==(const AdicSeries& a, const AdicSeries& b) {
    return a.gen_ == b.gen_ && a.precision_ == b.precision_ && a.c_ == b.c_;
  }

 private:
  Rational coeff_or_zero(unsigned k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Rational(0) : it->second;
  }

  std::string gen_ = "X";
  unsigned precision_ = 0;
  std::map<unsigned, Rational> c_;
};

Valuation valuation(const QPoly& p);
Valuation valuation(const AdicSeries& s);

// Strong triangle inequality for u(a, b) = nu(a - b).
bool ultrametric_check(const QPoly& x, const QPoly& y, const QPoly& z);

}  // namespace dmod
