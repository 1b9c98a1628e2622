#pragma once

#include <map>
#include <vector>

#include "dmod/adic.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

// Values of f at the consecutive integers lo, lo+1, ..., lo+size-1.
struct FunctionTable {
  long lo = 0;
  std::vector<Rational> values;

  long hi() const { return lo + static_cast<long>(values.size()) - 1; }
  bool empty() const { return values.empty(); }
  const Rational& at(long x) const;
  FunctionTable restricted(long from, long to) const;
  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.lo == b.lo && a.values == b.values;
  }
};

// sum c_d x(x-1)...(x-d+1)
class FallingSeries {
 public:
  FallingSeries() = default;
  explicit FallingSeries(std::map<unsigned, Rational> terms) : terms_(std::move(terms)) {}

  const std::map<unsigned, Rational>& terms() const { return terms_; }
  Rational eval(long x) const;
  FunctionTable table(long lo, long hi) const;

 private:
  std::map<unsigned, Rational> terms_;
};

Rational falling_factorial(const Rational& x, unsigned d);

// X^n . 1 = x^n
QPoly realize_differential(const AdicSeries& s);
// X^n . 1 = x(x-1)...(x-n+1)
FallingSeries realize_difference(const AdicSeries& s);

// D f(x) = f(x+1) - f(x), X f(x) = x f(x-1); the result lives on the common valid domain.
FunctionTable apply_difference(const QWeyl& op, const FunctionTable& f);

// (X D)^2 + X^2 - nu^2
QWeyl bessel_operator(const Rational& nu);

// Truncated abstract Bessel series X^n sum_k (-1)^k X^(2k) / (2^(n+2k) (n+k)! k!) below X^precision.
AdicSeries bessel_series(unsigned n, unsigned precision);

// sum over k >= 0 with n + 2k <= x of (-1)^k x(x-1)...(x-n-2k+1) / (2^(n+2k) (n+k)! k!)
Rational difference_bessel(unsigned n, long x);

}  // namespace dmod
