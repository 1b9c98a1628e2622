#include "dmod/scalar.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <sstream>

namespace dmod {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw Error("empty rational literal");
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  auto digits_only = [](const std::string& t) {
    if (t.empty()) return false;
    for (char ch : t)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  Rational out;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw Error("malformed rational literal '" + std::string(text) + "'");
    Integer d(den);
    if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    out = Rational(Integer(num), d);
    out.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_only(whole) || (!frac.empty() && !digits_only(frac)))
      throw Error("malformed decimal literal '" + std::string(text) + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    out = Rational(Integer(whole + frac), scale);
    out.canonicalize();
  } else {
    if (!digits_only(s)) throw Error("malformed integer literal '" + std::string(text) + "'");
    out = Rational(Integer(s));
  }
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational rational(long num, long den) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational pochhammer(const Rational& a, unsigned k) {
  Rational out(1);
  for (unsigned i = 0; i < k; ++i) out *= a + i;
  return out;
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Rational power(const Rational& base, unsigned e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return out;
}

unsigned digits_to_bits(unsigned digits) {
  return static_cast<unsigned>(std::ceil(digits * 3.3219280948873623)) + 8;
}

PrecisionScope::PrecisionScope(unsigned digits) : saved_(BigFloat::default_precision()) {
  BigFloat::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { BigFloat::default_precision(saved_); }

BigFloat to_bigfloat(const Rational& q) {
  BigFloat out;
  mpfr_set_q(out.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  BigFloat r = re * o.re - im * o.im;
  BigFloat i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  BigFloat d = o.re * o.re + o.im * o.im;
  if (d == 0) throw Error("division by zero");
  BigFloat r = (re * o.re + im * o.im) / d;
  BigFloat i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

BigFloat norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
BigFloat abs(const Complex& z) { return boost::multiprecision::sqrt(norm(z)); }
Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

std::string to_string(const Complex& z, unsigned digits) {
  std::ostringstream os;
  os.precision(digits);
  os << z.re;
  if (z.im != 0) {
    os << (z.im < 0 ? " - " : " + ") << boost::multiprecision::abs(z.im) << "i";
  }
  return os.str();
}

const Rational& Scalar::exact() const {
  if (!is_exact()) throw Error("scalar is not exact");
  return std::get<Rational>(value_);
}

Complex Scalar::approx() const {
  if (is_exact()) return Complex(std::get<Rational>(value_));
  return std::get<Complex>(value_);
}

bool Scalar::is_zero() const {
  if (is_exact()) return sgn(std::get<Rational>(value_)) == 0;
  return FieldTraits<Complex>::is_zero(std::get<Complex>(value_));
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(value_)));
  return Scalar(-std::get<Complex>(value_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
  return Scalar(a.approx() + b.approx());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
  return Scalar(a.approx() - b.approx());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
  return Scalar(a.approx() * b.approx());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw Error("division by zero");
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() / b.exact()));
  return Scalar(a.approx() / b.approx());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return a.approx() == b.approx();
}

std::string Scalar::str(unsigned digits) const {
  if (is_exact()) return to_string(exact());
  return to_string(std::get<Complex>(value_), digits);
}

}  // namespace dmod
