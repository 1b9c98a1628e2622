#include "doctest.h"

#include "dmod/heun.hpp"
#include "dmod/newton.hpp"
#include "dmod/weyl.hpp"
#include "support.hpp"

using namespace dmod;
using test::op;
using test::xpoly;

namespace {

const QWeyl X = QWeyl::raise(), D = QWeyl::lower();
QWeyl c(const Rational& v) { return QWeyl::scalar(v); }

}  // namespace

TEST_SUITE("weyl-core") {
  TEST_CASE("normal ordering of products") {
    CHECK(weyl_mul(D, X) == weyl_mul(X, D) + c(1));
    // D^2 X^2 = X^2 D^2 + 4 X D + 2
    QWeyl expect = QWeyl::term(1, 2, 2) + QWeyl::term(4, 1, 1) + c(2);
    CHECK(weyl_mul(pow(D, 2), pow(X, 2)) == expect);
    CHECK(commutator(D, X) == c(1));
  }

  TEST_CASE("closed reordering coefficient matches repeated products") {
    for (unsigned m = 0; m < 6; ++m)
      for (unsigned n = 0; n < 6; ++n) {
        QWeyl direct = weyl_mul(pow(D, m), pow(X, n));
        for (unsigned k = 0; k <= std::min(m, n); ++k)
          CHECK(direct.coeff(n - k, m - k) == reorder_coeff(m, n, k, 1));
      }
  }

  TEST_CASE("ladder pair commutator") {
    const GeneratorPair p = adag_pair();
    QWeyl adag = QWeyl::raise(p), a = QWeyl::lower(p);
    CHECK(commutator(adag, a) == QWeyl::scalar(2, p));
    CHECK(weyl_mul(a, adag) == QWeyl::term(1, 1, 1, p) - QWeyl::scalar(2, p));
  }

  TEST_CASE("commutator identities used by the doubly confluent case") {
    const Rational a = rational(2, 3), b = rational(-5, 7);
    QWeyl K = doubly_confluent_divisor(a, b);
    for (unsigned n = 0; n <= 6; ++n)
      CHECK(commutator(pow(D, n), K) == Rational(n) * (pow(D, n + 1) - pow(D, n)));
    const Rational gamma = rational(3, 4);
    QWeyl A = QWeyl::term(1, 1, 1).plus_scalar(gamma);
    CHECK(commutator(A, X) == X);
  }

  TEST_CASE("change of basis to the ladder pair") {
    QWeyl h = pow(D, 2) - pow(X, 2);
    QWeyl in_ladder = change_basis(h, adag_pair(), xd_to_adag());
    CHECK(in_ladder == QWeyl::term(1, 1, 1, adag_pair()) - QWeyl::scalar(1, adag_pair()));
    // A A^dag + 1 written in normal form
    const GeneratorPair p = adag_pair();
    CHECK(in_ladder == weyl_mul(QWeyl::lower(p), QWeyl::raise(p)) + QWeyl::scalar(1, p));
    CHECK(change_basis(in_ladder, xd_pair(), adag_to_xd()) == h);
    CHECK(change_basis(h, xd_pair(), identity_substitution()) == h);
  }

  TEST_CASE("Fourier automorphism keeps the relation") {
    QWeyl f = change_basis(X, xd_pair(), fourier());
    CHECK(f == D);
    CHECK(change_basis(D, xd_pair(), fourier()) == -X);
    for (int i = 0; i < 20; ++i) {
      QWeyl a = test::random_weyl(3, 3), b = test::random_weyl(3, 3);
      CHECK(change_basis(weyl_mul(a, b), xd_pair(), fourier()) ==
            weyl_mul(change_basis(a, xd_pair(), fourier()), change_basis(b, xd_pair(), fourier())));
    }
  }

  TEST_CASE("hypergeometric Heun operator factors through the ladder operators") {
    const Rational alpha = rational(1, 3), beta = rational(2, 5), gamma = rational(7, 4), delta = rational(-1, 6);
    const Rational epsilon = alpha + beta + 1 - gamma - delta;
    QWeyl H = QWeyl::term(1, 2, 2) - QWeyl::term(1, 1, 2) +
              (gamma + delta + epsilon) * QWeyl::term(1, 1, 1) - gamma * D + c(alpha * beta);
    QWeyl A = QWeyl::term(1, 1, 1).plus_scalar(gamma);
    QWeyl Adag = (QWeyl::term(1, 1, 1) - D).plus_scalar(alpha + beta - gamma);
    const Rational c2 = alpha * beta + gamma * (1 - delta - epsilon);
    CHECK(weyl_mul(A, Adag) + c(c2) == H);
  }

  TEST_CASE("orders under the three monomial orders") {
    CHECK(order_of(pow(D, 2) - X, OrderSpec::standard()) == 2);
    QWeyl dc = op("X^2*D^2 + (-X^2 + b*X + c)*D - a*X + q",
                  {{"a", 1}, {"b", 2}, {"c", 3}, {"q", rational(1, 2)}});
    CHECK(order_of(dc, OrderSpec::dual()) == 2);
    QWeyl G = QWeyl::term(1, 1, 1);
    CHECK(order_of(pow(G, 2) + pow(X, 2) - c(rational(1, 9)), OrderSpec::graded()) == 2);
  }

  TEST_CASE("monic first-order divisors") {
    CHECK(is_monic(D, OrderSpec::standard()));
    CHECK_FALSE(is_monic(QWeyl::term(1, 1, 1), OrderSpec::standard()));
    CHECK(is_monic(QWeyl::term(1, 1, 1).plus_scalar(rational(-2, 3)), OrderSpec::graded()));
    CHECK(is_monic(X, OrderSpec::dual()));
  }

  TEST_CASE("first-order division examples") {
    QWeyl airy = pow(D, 2) - X;
    for (unsigned m = 0; m < 8; ++m) {
      auto d = divide_first_order(weyl_mul(airy, pow(X, m)), D, OrderSpec::standard());
      std::vector<Rational> expect(m + 2);
      if (m >= 2) expect[m - 2] = Rational(m * (m - 1));
      expect[m + 1] = -1;
      CHECK(d.remainder == xpoly(expect, "X"));
    }
    const Rational nu = rational(1, 3);
    QWeyl G = QWeyl::term(1, 1, 1);
    QWeyl bessel = pow(G, 2) + pow(X, 2) - c(nu * nu);
    auto d = divide_first_order(bessel, G.plus_scalar(-nu), OrderSpec::graded());
    CHECK(d.quotient == G.plus_scalar(nu));
    CHECK(d.remainder == xpoly({0, 0, 1}, "X"));
    auto self = divide_first_order(D, D, OrderSpec::standard());
    CHECK(self.quotient == c(1));
    CHECK(self.remainder.is_zero());
    CHECK_THROWS_AS(divide_first_order(airy, QWeyl::term(1, 1, 1), OrderSpec::standard()), Error);
  }

  TEST_CASE("realization on polynomials") {
    CHECK(apply_to_poly(pow(D, 2) - X, xpoly({0, 0, 0, 1})) == xpoly({0, 6, 0, 0, -1}));
    for (unsigned n = 1; n < 8; ++n)
      CHECK(apply_to_poly(D, QPoly::monomial(1, n)) == QPoly::monomial(Rational(n), n - 1));
    HeunParams p{rational(3), rational(1, 2), rational(2, 3), rational(5, 4), rational(1, 3), rational(7, 12),
                 HeunVariant::Heun};
    CHECK(apply_to_poly(heun_operator(p), QPoly{1}) == xpoly({0, p.alpha * p.beta}));
  }

  TEST_CASE("graded data") {
    // X^2 D^2 = G (G - 1)
    CHECK(grade_product(2, 1) == xpoly({0, -1, 1}));
    CHECK(graded_defect(pow(QWeyl::term(1, 1, 1), 2) + pow(X, 2)) == 0);
    CHECK(graded_defect(X * X * D * D * D) == 1);
  }
}
