#pragma once

#include <random>

#include "dmod/opdsl.hpp"

namespace dmod::test {

// Fixed seeds keep every randomized suite reproducible.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261015);
  return gen;
}

// Small-height rational, nonzero when asked.
inline Rational random_rational(long bound = 9, bool nonzero = false) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  for (;;) {
    Rational q(num(rng()), den(rng()));
    q.canonicalize();
    if (!nonzero || sgn(q) != 0) return q;
  }
}

// Non-integer rational: keeps Pochhammer symbols and indicial gaps away from zero.
inline Rational random_generic(long bound = 9) {
  for (;;) {
    Rational q = random_rational(bound, true);
    if (q.get_den() != 1) return q;
  }
}

inline QPoly random_poly(unsigned max_degree, const std::string& gen = "x", long bound = 6) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::vector<Rational> c(deg(rng()) + 1);
  for (auto& v : c) v = random_rational(bound);
  return QPoly(c, gen);
}

inline QWeyl random_weyl(unsigned max_raise, unsigned max_lower, const GeneratorPair& pair = xd_pair()) {
  std::uniform_int_distribution<unsigned> r(0, max_raise), l(0, max_lower), count(1, 5);
  QWeyl out(pair);
  for (unsigned n = count(rng()); n > 0; --n) out.add(r(rng()), l(rng()), random_rational(5, true));
  return out;
}

inline QWeyl op(const std::string& text, const Bindings& b = {}) { return parse_operator(text, b); }

inline QWeyl bessel(const Rational& nu) { return op("X^2*D^2 + X*D + X^2 - nu^2", {{"nu", nu}}); }

// Biconfluent operator written over (A, ADAG), returned in the ladder pair.
inline QWeyl biconfluent(const Rational& alpha, const Rational& beta, const Rational& gamma) {
  QWeyl b = op("ADAG^2*((A - ADAG)^2*(ADAG*A + alpha - 1) + beta*(A - ADAG) + gamma)",
               {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}});
  return change_basis(b, adag_pair(), xd_to_adag());
}

inline QPoly xpoly(std::vector<Rational> c, const std::string& gen = "x") { return QPoly(std::move(c), gen); }

}  // namespace dmod::test
