#include "dmod/weyl.hpp"

namespace dmod {

GeneratorPair xd_pair() { return {"X", "D", Rational(1)}; }
GeneratorPair dx_pair() { return {"D", "X", Rational(-1)}; }
GeneratorPair adag_pair() { return {"ADAG", "A", Rational(-2)}; }

AffineSubstitution identity_substitution() { return {1, 0, 0, 0, 1, 0}; }

// X = (A - ADAG)/2, D = (A + ADAG)/2
AffineSubstitution xd_to_adag() {
  return {rational(-1, 2), rational(1, 2), 0, rational(1, 2), rational(1, 2), 0};
}

// ADAG = D - X, A = D + X
AffineSubstitution adag_to_xd() { return {-1, 1, 0, 1, 1, 0}; }

AffineSubstitution xd_to_dx() { return {0, 1, 0, 1, 0, 0}; }
AffineSubstitution dx_to_xd() { return {0, 1, 0, 1, 0, 0}; }

AffineSubstitution fourier() { return {0, 1, 0, -1, 0, 0}; }

AffineSubstitution invert(const AffineSubstitution& sub) {
  const Rational det = sub.p * sub.t - sub.q * sub.s;
  if (sgn(det) == 0) throw Error("non-invertible substitution");
  AffineSubstitution inv;
  inv.p = sub.t / det;
  inv.q = -sub.q / det;
  inv.r = (sub.q * sub.u - sub.t * sub.r) / det;
  inv.s = -sub.s / det;
  inv.t = sub.p / det;
  inv.u = (sub.s * sub.r - sub.p * sub.u) / det;
  return inv;
}

std::string coeff_to_string(const Rational& c) { return c.get_str(); }
std::string coeff_to_string(const Complex& c) { return to_string(c, 30); }

Rational reorder_coeff(unsigned m, unsigned n, unsigned k, const Rational& c) {
  Rational out(factorial(k) * binomial(m, k) * binomial(n, k));
  return out * power(c, k);
}

QPoly grade_product(unsigned j, const Rational& c) {
  QPoly out = QPoly::constant(Rational(1), "G");
  for (unsigned k = 0; k < j; ++k) out = out * QPoly(std::vector<Rational>{Rational(-c * k), Rational(1)}, "G");
  return out;
}

unsigned graded_defect(const QWeyl& op) {
  unsigned k = 0;
  for (const auto& [key, v] : op.terms())
    if (key.second > key.first) k = std::max(k, key.second - key.first);
  return k;
}

unsigned order_of(const QWeyl& op, OrderSpec spec) {
  switch (spec.mode) {
    case OrderMode::Standard:
    case OrderMode::Graded:
      return op.max_lower();
    case OrderMode::Dual:
      return op.max_raise();
  }
  return 0;
}

namespace {

// Standard orientation: k = kappa(E) F + v(E).
struct FirstOrderShape {
  QPoly kappa;
  QPoly v;
};

FirstOrderShape first_order_shape(const QWeyl& k) {
  if (k.max_lower() != 1) throw Error("divisor must have order 1");
  return {k.lower_coeff(1), k.lower_coeff(0)};
}

}  // namespace

QWeyl swap_orientation(const QWeyl& op) {
  if (op.pair() == xd_pair()) return change_basis(op, dx_pair(), xd_to_dx());
  if (op.pair() == dx_pair()) return change_basis(op, xd_pair(), dx_to_xd());
  GeneratorPair swapped{op.pair().lower, op.pair().raise, Rational(-op.pair().c)};
  return change_basis(op, swapped, AffineSubstitution{0, 1, 0, 1, 0, 0});
}

namespace {

Division<Rational> divide_standard(QWeyl f, const QWeyl& k, bool require_monic) {
  auto shape = first_order_shape(k);
  if (shape.kappa.is_zero()) throw Error("divisor has no first-order part");
  if (require_monic && shape.kappa.degree() != 0) throw Error("non-monic divisor");
  const GeneratorPair& pair = f.pair();
  QWeyl q(pair);
  while (f.max_lower() > 0) {
    const unsigned j = f.max_lower();
    QPoly top = f.lower_coeff(j);
    auto [h, rem] = divrem(top, shape.kappa);
    if (!rem.is_zero())
      throw Error("leading coefficient is not divisible by the divisor's leading coefficient");
    QWeyl step = weyl_mul(QWeyl::from_raise_poly(h, pair), QWeyl::lower(pair, j - 1));
    q += step;
    f -= weyl_mul(step, k);
    if (f.max_lower() == j && !f.lower_coeff(j).is_zero()) throw Error("division did not reduce the order");
  }
  return {q, f.lower_coeff(0)};
}

QWeyl from_grade_poly(const QPoly& h, const GeneratorPair& pair, unsigned raise_shift,
                      std::vector<QWeyl>& gpow) {
  QWeyl out(pair);
  for (size_t m = 0; m < h.size(); ++m) {
    if (sgn(h.coeffs()[m]) == 0) continue;
    while (gpow.size() <= m) gpow.push_back(weyl_mul(gpow.back(), gpow[1]));
    out += h.coeffs()[m] * gpow[m];
  }
  return weyl_mul(QWeyl::raise(pair, raise_shift), out);
}

Division<Rational> divide_graded(const QWeyl& f, const QWeyl& k, bool verify) {
  const GeneratorPair& pair = f.pair();
  Rational kappa = k.coeff(1, 1);
  for (const auto& [key, v] : k.terms())
    if (key != QWeyl::Key{1, 1} && key != QWeyl::Key{0, 0}) throw Error("non-monic divisor for graded order");
  if (sgn(kappa) == 0) throw Error("non-monic divisor for graded order");
  const Rational lambda = -k.coeff(0, 0) / kappa;
  QPoly r = graded_remainder(f, lambda);
  std::vector<QWeyl> gpow{QWeyl::scalar(1, pair), weyl_mul(QWeyl::raise(pair), QWeyl::lower(pair))};
  QWeyl q(pair);
  const QPoly divisor(std::vector<Rational>{Rational(-lambda), Rational(1)}, "G");
  for (const auto& [key, v] : f.terms()) {
    auto [i, j] = key;
    if (j == 0) continue;
    QPoly pj = grade_product(j, pair.c);
    QPoly diff = pj - QPoly::constant(pj.eval(lambda), "G");
    auto [h, rem] = divrem(diff, divisor);
    q += Rational(v / kappa) * from_grade_poly(h, pair, i - j, gpow);
  }
  Division<Rational> out{q, r.with_gen(pair.raise)};
  if (verify) {
    QWeyl back = weyl_mul(q, k) + QWeyl::from_raise_poly(out.remainder, pair);
    if (back != f) throw Error("graded division failed re-multiplication check");
  }
  return out;
}

}  // namespace

QPoly graded_remainder(const QWeyl& f, const Rational& lambda) {
  std::vector<Rational> r;
  std::map<unsigned, Rational> pj_cache;
  for (const auto& [key, v] : f.terms()) {
    auto [i, j] = key;
    if (i < j) throw Error("operator not expressible in graded form (needs a left factor of the raise generator)");
    auto it = pj_cache.find(j);
    if (it == pj_cache.end()) it = pj_cache.emplace(j, grade_product(j, f.pair().c).eval(lambda)).first;
    if (r.size() <= i - j) r.resize(i - j + 1);
    r[i - j] += v * it->second;
  }
  return QPoly(std::move(r), f.pair().raise);
}

bool is_monic(const QWeyl& k, OrderSpec spec) {
  switch (spec.mode) {
    case OrderMode::Standard: {
      if (k.max_lower() != 1) throw Error("is_monic requires an order-1 operator");
      auto shape = first_order_shape(k);
      return shape.kappa.degree() == 0;
    }
    case OrderMode::Dual: {
      if (k.max_raise() != 1) throw Error("is_monic requires an order-1 operator");
      return is_monic(swap_orientation(k), OrderSpec::standard());
    }
    case OrderMode::Graded: {
      if (k.max_lower() != 1) throw Error("is_monic requires an order-1 operator");
      for (const auto& [key, v] : k.terms())
        if (key != QWeyl::Key{1, 1} && key != QWeyl::Key{0, 0}) return false;
      return sgn(k.coeff(1, 1)) != 0;
    }
  }
  return false;
}

Division<Rational> divide_first_order(const QWeyl& f, const QWeyl& k, OrderSpec spec, bool verify) {
  if (f.pair() != k.pair()) throw Error("mismatched generator pairs in division");
  if (!is_monic(k, spec)) throw Error("non-monic divisor");
  switch (spec.mode) {
    case OrderMode::Standard: {
      auto out = divide_standard(f, k, true);
      if (verify && weyl_mul(out.quotient, k) + QWeyl::from_raise_poly(out.remainder, f.pair()) != f)
        throw Error("division failed re-multiplication check");
      return out;
    }
    case OrderMode::Dual: {
      QWeyl fs = swap_orientation(f), ks = swap_orientation(k);
      auto out = divide_standard(fs, ks, true);
      QWeyl q = swap_orientation(out.quotient);
      Division<Rational> back{q, out.remainder.with_gen(f.pair().lower)};
      if (verify && weyl_mul(q, k) + QWeyl::from_lower_poly(back.remainder, f.pair()) != f)
        throw Error("division failed re-multiplication check");
      return back;
    }
    case OrderMode::Graded:
      return divide_graded(f, k, verify);
  }
  throw Error("unknown order mode");
}

Division<Rational> divide_exact_first_order(const QWeyl& f, const QWeyl& k, OrderSpec spec) {
  if (f.pair() != k.pair()) throw Error("mismatched generator pairs in division");
  if (spec.mode == OrderMode::Graded) return divide_graded(f, k, true);
  if (spec.mode == OrderMode::Standard) {
    auto out = divide_standard(f, k, false);
    if (weyl_mul(out.quotient, k) + QWeyl::from_raise_poly(out.remainder, f.pair()) != f)
      throw Error("division failed re-multiplication check");
    return out;
  }
  QWeyl fs = swap_orientation(f), ks = swap_orientation(k);
  auto out = divide_standard(fs, ks, false);
  QWeyl q = swap_orientation(out.quotient);
  Division<Rational> back{q, out.remainder.with_gen(f.pair().lower)};
  if (weyl_mul(q, k) + QWeyl::from_lower_poly(back.remainder, f.pair()) != f)
    throw Error("division failed re-multiplication check");
  return back;
}

QPoly apply_to_poly(const QWeyl& op, const QPoly& p) {
  if (op.pair() != xd_pair()) throw Error("differential realization needs the (X, D) pair");
  std::vector<QPoly> derivs{p.with_gen("x")};
  QPoly out({}, "x");
  for (const auto& [key, v] : op.terms()) {
    while (derivs.size() <= key.second) derivs.push_back(derivs.back().derivative());
    out += derivs[key.second].shifted(key.first).scaled(v);
  }
  return out;
}

}  // namespace dmod
