#include "doctest.h"

#include <boost/multiprecision/mpfr.hpp>

#include "dmod/newton.hpp"
#include "dmod/realize.hpp"
#include "support.hpp"

using namespace dmod;
using test::xpoly;

namespace {

FunctionTable table_of(long lo, std::vector<Rational> v) { return {lo, std::move(v)}; }

// Finite sum taken straight from the definition, without the library's helpers.
Rational brute_bessel(unsigned n, long x) {
  Rational sum = 0;
  for (unsigned k = 0; n + 2 * k <= static_cast<unsigned long>(std::max(x, 0L)); ++k) {
    Rational falling = 1;
    for (unsigned i = 0; i < n + 2 * k; ++i) falling *= x - static_cast<long>(i);
    Rational den = 1;
    for (unsigned i = 0; i < n + 2 * k; ++i) den *= 2;
    for (unsigned i = 1; i <= n + k; ++i) den *= i;
    for (unsigned i = 1; i <= k; ++i) den *= i;
    sum += (k % 2 ? -1 : 1) * falling / den;
  }
  return sum;
}

}  // namespace

TEST_SUITE("realizations") {
  TEST_CASE("differential realization") {
    SolveResult s = newton_iterate({test::op("D^2 - X"), Divisor::lower(), OrderSpec::standard(), QPoly({1}, "X"), 40, 2});
    CHECK(realize_differential(s.series) == xpoly({1, 0, 0, rational(1, 6), 0, 0, rational(1, 180)}));
    CHECK(realize_differential(AdicSeries("X", 5)).is_zero());
  }

  TEST_CASE("Bessel partial sums at x = 1/2 (informational)") {
    PrecisionScope scope(30);
    SolveResult s = solve_frobenius(test::op("X^2*D^2 + X*D + X^2 - 1/4"), rational(1, 2), 16);
    QPoly p = realize_differential(s.series);
    BigFloat value = to_bigfloat(p.eval(rational(1, 2)));
    // sum (-1)^k x^(2k) / (4^k (3/2)_k k!) = sin(x) / x
    BigFloat reference = boost::multiprecision::sin(BigFloat("0.5")) / BigFloat("0.5");
    MESSAGE("partial sum " << value.str(25) << " vs sin(x)/x " << reference.str(25));
  }

  TEST_CASE("difference realization") {
    FallingSeries sq = realize_difference(AdicSeries::from_poly(xpoly({0, 0, 1}, "X"), 0));
    for (long x = -3; x <= 6; ++x) CHECK(sq.eval(x) == Rational(x * (x - 1)));
    FallingSeries one = realize_difference(AdicSeries::from_poly(xpoly({1}, "X"), 0));
    CHECK(one.eval(17) == 1);
    FallingSeries j0 = realize_difference(bessel_series(0, 20));
    for (long x = 0; x <= 15; ++x) CHECK(j0.eval(x) == difference_bessel(0, x));
  }

  TEST_CASE("difference operators on tables") {
    FunctionTable id = table_of(0, {0, 1, 2, 3, 4, 5});
    FunctionTable d = apply_difference(QWeyl::lower(), id);
    CHECK(d == table_of(0, {1, 1, 1, 1, 1}));

    QWeyl rel = weyl_mul(QWeyl::lower(), QWeyl::raise()) - weyl_mul(QWeyl::raise(), QWeyl::lower());
    for (int i = 0; i < 10; ++i) {
      std::vector<Rational> v(12);
      for (auto& x : v) x = test::random_rational();
      FunctionTable f = table_of(3, v);
      FunctionTable r = apply_difference(rel, f);
      CHECK(r == f.restricted(r.lo, r.hi()));
      CHECK(r.values.size() >= 9);
    }
    CHECK_THROWS_AS(apply_difference(pow(QWeyl::lower(), 4), table_of(0, {1, 2, 3})), Error);
  }

  TEST_CASE("Bessel operator annihilates the difference Bessel table") {
    for (unsigned n = 0; n <= 3; ++n) {
      FunctionTable t = realize_difference(bessel_series(n, 20)).table(0, 16);
      FunctionTable r = apply_difference(bessel_operator(Rational(n)), t);
      CHECK(r.lo == 0);
      CHECK(r.hi() >= 15);
      for (const auto& v : r.values) CHECK(sgn(v) == 0);
    }
  }

  TEST_CASE("difference Bessel values") {
    for (unsigned n = 1; n <= 4; ++n) CHECK(difference_bessel(n, 0) == 0);
    CHECK(difference_bessel(0, 0) == 1);
    CHECK(difference_bessel(1, 3) == brute_bessel(1, 3));
    CHECK(difference_bessel(1, 3) == rational(9, 8));
    CHECK(difference_bessel(0, 4) == rational(-13, 8));
    for (unsigned n = 0; n <= 4; ++n)
      for (long x = 0; x <= 12; ++x) CHECK(difference_bessel(n, x) == brute_bessel(n, x));
    CHECK_THROWS_AS(difference_bessel(0, -1), Error);
  }
}
