#include "doctest.h"

#include "dmod/heun.hpp"
#include "support.hpp"

using namespace dmod;
using test::xpoly;

namespace {

struct ApparentHeun {
  Rational al = rational(1, 3), be = rational(2, 5), ga = rational(7, 4), e1 = rational(5, 2);
  Rational a() const { return e1 * (e1 - ga + 1) / ((e1 - al) * (e1 - be)); }
  Rational qstar() const { return al * be * (e1 + 1) * (e1 - ga + 1) / ((e1 - al) * (e1 - be)); }
  HeunParams params() const { return {a(), al, be, ga, al + be - ga + 2, -1, HeunVariant::Heun}; }
};

HeunParams confluent(const Rational& alpha, const Rational& gamma, const Rational& delta, const Rational& eps) {
  return {0, alpha, 0, gamma, delta, eps, HeunVariant::Confluent};
}

template <class... T>
std::vector<Scalar> sv(const T&... v) {
  return {Scalar(Rational(v))...};
}

QPoly A_(const std::string& g, unsigned n) { return QPoly::monomial(1, n, g); }

void check_division(const HeunParams& p, const QPoly& s) {
  ABasisTriple t = div_in_A(p, s);
  QWeyl lhs = weyl_mul(heun_operator(p), eval_ladder(p, s));
  QWeyl rhs = weyl_mul(weyl_mul(eval_ladder(p, t.P), ladder_multiplier(p)) + eval_ladder(p, t.Q), heun_divisor(p)) +
              eval_ladder(p, t.R);
  CHECK(lhs == rhs);
}

}  // namespace

TEST_SUITE("heun-eigen") {
  TEST_CASE("generalized hypergeometric operator annihilates its series") {
    const Rational alpha = rational(2, 3), gamma = rational(5, 4);
    QWeyl L = generalized_hypergeometric<Rational>({alpha}, {gamma});
    std::vector<Rational> c;
    for (unsigned n = 0; n < 15; ++n) c.push_back(pochhammer(alpha, n) / (pochhammer(gamma, n) * Rational(factorial(n))));
    QPoly image = apply_to_poly(L, xpoly(c));
    // Only the truncation tail survives.
    CHECK(image.valuation() >= 14);
  }

  TEST_CASE("division seeds of the three variants") {
    const Rational a = rational(3), al = rational(1, 2), be = rational(2, 3), ga = rational(5, 4), de = rational(1, 3);
    HeunParams p{a, al, be, ga, de, al + be + 1 - ga - de, HeunVariant::Heun};
    ABasisTriple t = div_in_A(p, QPoly({1}, "A"));
    const Rational eps = p.epsilon;
    CHECK(t.R == xpoly({al * be * a - ga * eps * (a - 1), eps * (a - 1)}, "A"));

    HeunParams p0{a, al, be, ga, al + be + 1 - ga, 0, HeunVariant::Heun};
    CHECK(div_in_A(p0, QPoly({1}, "A")).R == QPoly({al * be * a}, "A"));

    HeunParams pc = confluent(al, ga, de, rational(5, 3));
    check_division(pc, QPoly({1}, "A"));
  }

  TEST_CASE("A^n recursion and its leading-coefficient laws") {
    ApparentHeun m;
    HeunParams p = m.params();
    for (unsigned n = 0; n <= 6; ++n) {
      ABasisTriple t = div_in_A(p, A_("A", n));
      CHECK(t.P == pow(xpoly({-1, 1}, "A"), n));
      CHECK(t.Q == pow(xpoly({1, 1}, "A"), n).scaled(-p.a));
      CHECK(t.R.degree() <= static_cast<int>(n) + 1);
      CHECK(t.R.coeff(n + 1) == (p.epsilon + n) * (p.a - 1));
      check_division(p, A_("A", n));
    }
    HeunParams hat = p;
    hat.variant = HeunVariant::HeunHat;
    for (unsigned n = 0; n <= 4; ++n) check_division(hat, A_(ladder_name(hat), n));
    HeunParams pc = confluent(rational(2, 7), rational(3, 5), rational(-4, 3), rational(5, 3));
    for (unsigned n = 0; n <= 6; ++n) {
      ABasisTriple t = div_in_A(pc, A_("A", n));
      CHECK(t.R.degree() == static_cast<int>(n) + 1);
      CHECK(t.R.lead() == pc.delta + n);
      check_division(pc, A_("A", n));
    }
  }

  TEST_CASE("random polynomial division re-multiplies") {
    ApparentHeun m;
    for (int i = 0; i < 10; ++i) check_division(m.params(), test::random_poly(4, "A"));
  }

  TEST_CASE("remainder matrices") {
    const Rational al = rational(2, 7), ga = rational(3, 5), de = -1, ep = rational(5, 3);
    QMatrix mc = remainder_matrix(confluent(al, ga, de, ep), 1);
    QMatrix expect{{al * ep - de * ga, al * ep - ga * ep + ga}, {de, al * ep - de * ga + ep - ga - 1}};
    CHECK(mc == expect);

    HeunParams p0{rational(3), rational(1, 2), rational(2, 3), rational(5, 4), rational(11, 12), 0, HeunVariant::Heun};
    CHECK(remainder_matrix(p0, 0) == QMatrix{{p0.alpha * p0.beta * p0.a}});

    ApparentHeun m;
    QMatrix mm = remainder_matrix(m.params(), 1);
    QPoly cp = characteristic_polynomial(mm);
    CHECK(sgn(cp.eval(m.qstar())) == 0);
    CHECK_THROWS_AS(remainder_matrix(m.params(), 2), Error);
  }

  TEST_CASE("characteristic polynomial") {
    QMatrix diag{{2, 0, 0}, {0, 3, 0}, {0, 0, rational(1, 2)}};
    CHECK(characteristic_polynomial(diag) == xpoly({-2 * 3 * rational(1, 2), 0, 0, 1}, "q") +
                                                 xpoly({0, 2 * 3 + 2 * rational(1, 2) + 3 * rational(1, 2)}, "q") +
                                                 xpoly({0, 0, -(2 + 3 + rational(1, 2))}, "q"));
  }

  TEST_CASE("eigen solving") {
    auto one = eigen_solve({{rational(7, 3)}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].qstar == Scalar(rational(7, 3)));
    CHECK(one[0].sstar.size() == 1);
    CHECK(one[0].e_list.empty());

    auto diag = eigen_solve({{2, 0}, {0, 5}});
    std::vector<Rational> vals;
    for (const auto& s : diag) vals.push_back(s.qstar.exact());
    std::sort(vals.begin(), vals.end());
    CHECK(vals == std::vector<Rational>{2, 5});

    // Irrational eigenvalues fall back to floating arithmetic with small residuals.
    auto fl = eigen_solve({{0, 1}, {2, 0}}, 50);
    REQUIRE(fl.size() == 2);
    for (const auto& s : fl) {
      CHECK_FALSE(s.exact);
      CHECK(s.residual < BigFloat("1e-40"));
    }
  }

  TEST_CASE("e extraction") {
    const Rational gamma = rational(5, 4), e1 = rational(-2, 3);
    auto e = extract_e({Scalar(e1 - gamma), Scalar(1)}, gamma);
    REQUIRE(e.size() == 1);
    CHECK(e[0] == Scalar(e1));

    // (A - gamma + e1)(A - gamma + e2) re-expands to the input.
    const Rational e2 = rational(7, 2);
    QPoly s = xpoly({e1 - gamma, 1}, "A") * xpoly({e2 - gamma, 1}, "A");
    std::vector<Scalar> sc(s.coeffs().begin(), s.coeffs().end());
    auto two = extract_e(sc, gamma);
    REQUIRE(two.size() == 2);
    QPoly back = QPoly({1}, "A");
    for (const auto& v : two) back = back * xpoly({v.exact() - gamma, 1}, "A");
    CHECK(back == s);

    PrecisionScope scope(60);
    // Confluent delta = -1: e1 = (q* + 2 gamma delta - alpha eps + gamma - eps + 1) / delta.
    const Rational al = rational(2, 7), ga = rational(3, 5), ep = rational(5, 3), de = -1;
    for (const auto& sol : eigen_solve(remainder_matrix(confluent(al, ga, de, ep), 1), 50)) {
      auto es = extract_e(sol.sstar, ga, 50);
      REQUIRE(es.size() == 1);
      Complex expect = (sol.qstar.approx() + Complex(Rational(2 * ga * de - al * ep + ga - ep + 1))) / Complex(de);
      CHECK(abs(es[0].approx() - expect) < BigFloat("1e-40"));
    }
    CHECK_THROWS_AS(extract_e({Scalar(Rational(0)), Scalar(1)}, 0), Error);
  }

  TEST_CASE("series identities") {
    ApparentHeun m;
    auto lhs = SeriesSpec::euler_factors({Scalar(m.e1)}, SeriesSpec::hypergeometric(sv(m.al, m.be), sv(m.ga)));
    auto rhs = SeriesSpec::hypergeometric(sv(m.al, m.be, m.e1 + 1), sv(m.ga, m.e1));
    IdentityCheck ic = verify_identity_series(lhs, rhs, 30);
    CHECK(ic.equal);
    CHECK(ic.exact);
    auto f = SeriesSpec::hypergeometric(sv(m.al, m.be), sv(m.ga));
    CHECK(verify_identity_series(f, f, 30).equal);

    // Kummer: 1F1(a; c; x) = e^x 1F1(c - a; c; -x)
    const Rational a = rational(2, 3), c = rational(9, 5);
    auto k1 = SeriesSpec::hypergeometric(sv(a), sv(c));
    auto k2 = SeriesSpec::product(SeriesSpec::exponential(1), SeriesSpec::hypergeometric(sv(c - a), sv(c), -1));
    CHECK(verify_identity_series(k1, k2, 25).equal);

    auto wrong = SeriesSpec::hypergeometric(sv(a + 1), sv(c));
    IdentityCheck bad = verify_identity_series(k1, wrong, 25);
    CHECK_FALSE(bad.equal);
    REQUIRE(bad.mismatch);
    CHECK(*bad.mismatch == 1);
  }

  TEST_CASE("factorization checks") {
    ApparentHeun m;
    HeunParams p = m.params();
    QWeyl target = factorization_target(p, std::vector<Rational>{m.e1});
    CHECK(verify_factorization(target, heun_operator(p), m.qstar()).ok);
    CHECK_FALSE(verify_factorization(target, heun_operator(p), m.qstar() + 1).ok);
    CHECK(verify_factorization(heun_operator(p), heun_operator(p), 0).ok);
  }

  TEST_CASE("full pipeline for the apparent-singularity instance") {
    ApparentHeun m;
    HeunEigenReport rep = heun_eigen(m.params());
    CHECK(rep.verified);
    bool found = false;
    for (const auto& c : rep.eigen)
      if (c.solution.qstar == Scalar(m.qstar())) {
        found = true;
        REQUIRE(c.solution.e_list.size() == 1);
        CHECK(c.solution.e_list[0] == Scalar(m.e1));
      }
    CHECK(found);
  }

  TEST_CASE("parameter validation") {
    HeunParams bad{rational(3), 1, 1, 1, 1, 2, HeunVariant::Heun};
    CHECK_THROWS_AS(bad.check(), Error);
    CHECK(parse_heun_variant("heun-hat") == HeunVariant::HeunHat);
    CHECK_THROWS_AS(parse_heun_variant("sphere"), Error);
    CHECK_THROWS_AS(invariant_degree(HeunParams{rational(3), rational(1, 2), 1, 1, rational(1, 2), 1, HeunVariant::Heun}),
                    Error);
  }
}
