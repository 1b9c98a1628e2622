#include "dmod/poly.hpp"

#include <boost/math/constants/constants.hpp>

#include <mpfr.h>

#include <random>
#include <sstream>

namespace dmod {

std::string to_string(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = p.size(); k-- > 0;) {
    const Rational& c = p.coeffs()[k];
    if (sgn(c) == 0) continue;
    Rational a = abs(c);
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    bool unit = a == 1;
    if (!unit || k == 0) os << a.get_str();
    if (k > 0) {
      if (!unit) os << "*";
      os << p.gen();
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

std::vector<std::pair<QPoly, unsigned>> square_free(const QPoly& p) {
  if (p.is_zero()) throw Error("square-free decomposition of zero polynomial");
  std::vector<std::pair<QPoly, unsigned>> out;
  QPoly f = p.monic();
  if (f.degree() == 0) return out;
  QPoly df = f.derivative();
  QPoly a = gcd(f, df);
  QPoly b = divrem(f, a).first;
  QPoly c = divrem(df, a).first;
  QPoly d = c - b.derivative();
  for (unsigned i = 1; b.degree() > 0; ++i) {
    QPoly g = gcd(b, d);
    b = divrem(b, g).first;
    c = divrem(d, g).first;
    d = c - b.derivative();
    if (g.degree() > 0) out.emplace_back(g.monic().with_gen(p.gen()), i);
  }
  return out;
}

namespace {

Complex eval_c(const CPoly& p, const Complex& z) { return p.eval(z); }

// Simultaneous Weierstrass iteration for a monic polynomial.
std::vector<Complex> durand_kerner(const CPoly& monic, unsigned digits) {
  const int n = monic.degree();
  std::vector<Complex> z(n);
  if (n == 0) return z;
  if (n == 1) {
    z[0] = -monic.coeff(0);
    return z;
  }
  BigFloat bound = 0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, abs(monic.coeff(k)));
  bound = 1 + bound;

  const BigFloat tol = boost::multiprecision::pow(BigFloat(10), -static_cast<int>(digits) + 4);
  const BigFloat pi = boost::math::constants::pi<BigFloat>();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);

  auto seed = [&](double phase, const BigFloat& radius) {
    for (int k = 0; k < n; ++k) {
      BigFloat theta = 2 * pi * k / n + phase;
      z[k] = Complex(radius * cos(theta), radius * sin(theta));
    }
  };
  seed(0.4, bound / 2);

  const int max_iter = 600 + 60 * n;
  for (int restart = 0; restart < 8; ++restart) {
    BigFloat last = -1;
    int stagnant = 0;
    for (int it = 0; it < max_iter; ++it) {
      BigFloat worst = 0;
      for (int i = 0; i < n; ++i) {
        Complex denom(1);
        for (int j = 0; j < n; ++j)
          if (j != i) denom *= z[i] - z[j];
        if (FieldTraits<Complex>::is_zero(denom)) denom = Complex(tol);
        Complex w = eval_c(monic, z[i]) / denom;
        z[i] -= w;
        BigFloat rel = abs(w) / std::max(BigFloat(1), abs(z[i]));
        worst = std::max(worst, rel);
      }
      if (worst <= tol) return z;
      if (last >= 0 && worst >= last * 0.999) {
        if (++stagnant > 200) break;
      } else {
        stagnant = 0;
      }
      last = worst;
    }
    for (int k = 0; k < n; ++k) z[k] += Complex(BigFloat(jitter(rng)) * bound / 8, BigFloat(jitter(rng)) * bound / 8);
  }
  return z;
}

void polish(const CPoly& p, std::vector<Complex>& roots) {
  CPoly dp = p.derivative();
  for (auto& r : roots) {
    for (int step = 0; step < 3; ++step) {
      Complex d = dp.eval(r);
      if (FieldTraits<Complex>::is_zero(d)) break;
      r -= p.eval(r) / d;
    }
  }
}

}  // namespace

std::vector<Complex> poly_roots(const CPoly& p, unsigned digits) {
  if (p.is_zero()) throw Error("no roots of zero polynomial");
  PrecisionScope scope(digits + 20);
  CPoly work = to_complex(p);
  CPoly monic = work.monic();
  auto roots = durand_kerner(monic, digits + 20);
  polish(monic, roots);
  return roots;
}

std::vector<Complex> poly_roots(const QPoly& p, unsigned digits) {
  if (p.is_zero()) throw Error("no roots of zero polynomial");
  std::vector<Complex> out;
  PrecisionScope scope(digits + 20);
  for (const auto& [factor, mult] : square_free(p)) {
    auto rs = poly_roots(to_complex(factor), digits);
    for (unsigned m = 0; m < mult; ++m) out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

std::optional<Rational> reconstruct_rational(const BigFloat& x, unsigned digits) {
  using boost::multiprecision::floor;
  const BigFloat tol = boost::multiprecision::pow(BigFloat(10), -static_cast<int>(digits) + 6) *
                       std::max(BigFloat(1), BigFloat(boost::multiprecision::abs(x)));
  Integer max_den;
  mpz_ui_pow_ui(max_den.get_mpz_t(), 10, digits / 2);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  BigFloat rest = x;
  for (int step = 0; step < 4 * static_cast<int>(digits); ++step) {
    BigFloat a_f = floor(rest);
    Integer a;
    mpfr_get_z(a.get_mpz_t(), a_f.backend().data(), MPFR_RNDD);
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) return std::nullopt;
    Rational cand(p2, q2);
    cand.canonicalize();
    if (boost::multiprecision::abs(to_bigfloat(cand) - x) <= tol) return cand;
    BigFloat frac = rest - a_f;
    if (frac == 0) return cand;
    rest = 1 / frac;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

std::vector<Rational> rational_roots(const QPoly& p, unsigned digits) {
  std::vector<Rational> out;
  if (p.is_zero()) return out;
  PrecisionScope scope(digits + 20);
  for (const auto& [factor, mult] : square_free(p)) {
    for (const auto& r : poly_roots(factor, digits)) {
      if (boost::multiprecision::abs(r.im) > boost::multiprecision::pow(BigFloat(10), -static_cast<int>(digits) / 2))
        continue;
      auto q = reconstruct_rational(r.re, digits);
      if (q && sgn(factor.eval(*q)) == 0) {
        bool seen = false;
        for (const auto& s : out) seen = seen || s == *q;
        if (!seen)
          for (unsigned m = 0; m < mult; ++m) out.push_back(*q);
      }
    }
  }
  return out;
}

RationalFunction::RationalFunction(QPoly num, QPoly den) {
  if (den.is_zero()) throw Error("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = QPoly({}, num.gen());
    den_ = QPoly::constant(Rational(1), num.gen());
    return;
  }
  QPoly g = gcd(num, den);
  num = divrem(num, g).first;
  den = divrem(den, g).first;
  Rational lc = den.lead();
  num_ = num.scaled(Rational(1 / lc));
  den_ = den.scaled(Rational(1 / lc));
}

RationalFunction RationalFunction::derivative() const {
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Rational RationalFunction::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (sgn(d) == 0) throw Error("rational function evaluated at a pole");
  return num_.eval(x) / d;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error("rational function division by zero");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RationalFunction::str() const {
  if (den_.degree() == 0) return to_string(num_);
  return "(" + to_string(num_) + ")/(" + to_string(den_) + ")";
}

}  // namespace dmod
