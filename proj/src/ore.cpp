#include "dmod/ore.hpp"

namespace dmod {

OreDivision ore_right_divide(const RatOre& l, const RatOre& m) {
  if (m.is_zero()) throw Error("division by zero operator");
  RatOre q, r = l;
  const RationalFunction& lm = m.lead();
  while (!r.is_zero() && r.degree() >= m.degree()) {
    const size_t shift = r.degree() - m.degree();
    RatOre step = RatOre::monomial(r.lead() / lm, shift);
    q += step;
    r -= ore_mul(step, m);
  }
  return {q, r};
}

RatOre weyl_to_ore(const QWeyl& op) {
  if (op.pair() != xd_pair()) throw Error("Ore transcription needs the (X, D) pair");
  std::vector<RationalFunction> c;
  for (unsigned j = 0; j <= op.max_lower() && !op.is_zero(); ++j)
    c.emplace_back(op.lower_coeff(j).with_gen("x"));
  return RatOre(std::move(c));
}

RationalFunction ore_apply(const RatOre& op, const QPoly& p) {
  RationalFunction out;
  RationalFunction d{p.with_gen("x")};
  for (size_t k = 0; k < op.coeffs().size(); ++k) {
    out = out + op.coeffs()[k] * d;
    d = d.derivative();
  }
  return out;
}

std::string to_string(const RatOre& op) {
  if (op.is_zero()) return "0";
  std::string out;
  for (size_t k = op.coeffs().size(); k-- > 0;) {
    if (op.coeffs()[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + op.coeffs()[k].str() + ")";
    if (k > 0) out += k == 1 ? "*D" : "*D^" + std::to_string(k);
  }
  return out;
}

}  // namespace dmod
