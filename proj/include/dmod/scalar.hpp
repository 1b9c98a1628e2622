#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace dmod {

using Integer = mpz_class;
using Rational = mpq_class;
using BigFloat = boost::multiprecision::mpfr_float;

// Thrown for every domain failure; the message names the violated condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational rational(long num, long den = 1);

Rational pochhammer(const Rational& a, unsigned k);
Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);
Rational power(const Rational& base, unsigned e);

unsigned digits_to_bits(unsigned digits);

// Sets the default MPFR precision for values constructed inside the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

BigFloat to_bigfloat(const Rational& q);

struct Complex {
  BigFloat re;
  BigFloat im;

  Complex() : re(0), im(0) {}
  Complex(BigFloat r, BigFloat i = BigFloat(0)) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(const Rational& q) : re(to_bigfloat(q)), im(0) {}
  Complex(int v) : re(v), im(0) {}

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return Complex(-re, -im); }
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
bool operator==(const Complex& a, const Complex& b);
BigFloat abs(const Complex& z);
BigFloat norm(const Complex& z);
Complex conj(const Complex& z);
std::string to_string(const Complex& z, unsigned digits = 20);

// Exact value or big-float approximation; mixed arithmetic promotes to float.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) {}
  Scalar(Complex z) : value_(std::move(z)) {}
  Scalar(int v) : value_(Rational(v)) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const;
  Complex approx() const;
  bool is_zero() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

  std::string str(unsigned digits = 20) const;

 private:
  std::variant<Rational, Complex> value_;
};

// Uniform field interface for the templates over Rational and Complex.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from(const Rational& q) { return q; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static BigFloat magnitude(const Rational& x) { return to_bigfloat(abs(x)); }
};

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static Complex from(const Rational& q) { return Complex(q); }
  static bool is_zero(const Complex& x) { return x.re == 0 && x.im == 0; }
  static BigFloat magnitude(const Complex& x) { return abs(x); }
};

template <class F>
bool is_zero(const F& x) {
  return FieldTraits<F>::is_zero(x);
}

}  // namespace dmod
