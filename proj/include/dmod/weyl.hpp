#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dmod/poly.hpp"
#include "dmod/scalar.hpp"

namespace dmod {

// Pair (E, F) with [F, E] = c; normal form keeps F rightmost.
struct GeneratorPair {
  std::string raise;
  std::string lower;
  Rational c;

  // G = E*F satisfies G*E = E*(G + shift()).
  Rational shift() const { return c; }
  std::string grade_symbol() const { return raise + "*" + lower; }
  friend bool operator==(const GeneratorPair& a, const GeneratorPair& b) {
    return a.raise == b.raise && a.lower == b.lower && a.c == b.c;
  }
  friend bool operator!=(const GeneratorPair& a, const GeneratorPair& b) { return !(a == b); }
};

GeneratorPair xd_pair();    // (X, D), [D, X] = 1
GeneratorPair dx_pair();    // (D, X), [X, D] = -1
GeneratorPair adag_pair();  // (ADAG, A), A = D + X, ADAG = D - X, [A, ADAG] = -2

// Old generators in terms of the target pair:
//   raise = p*E' + q*F' + r,  lower = s*E' + t*F' + u.
struct AffineSubstitution {
  Rational p, q, r, s, t, u;
};

AffineSubstitution identity_substitution();
AffineSubstitution xd_to_adag();
AffineSubstitution adag_to_xd();
AffineSubstitution xd_to_dx();
AffineSubstitution dx_to_xd();
AffineSubstitution fourier();  // X -> D, D -> -X inside (X, D)
AffineSubstitution invert(const AffineSubstitution& sub);

enum class OrderMode { Standard, Dual, Graded };

struct OrderSpec {
  OrderMode mode = OrderMode::Standard;
  static OrderSpec standard() { return {OrderMode::Standard}; }
  static OrderSpec dual() { return {OrderMode::Dual}; }
  static OrderSpec graded() { return {OrderMode::Graded}; }
};

std::string coeff_to_string(const Rational& c);
std::string coeff_to_string(const Complex& c);

template <class F>
class WeylOp {
 public:
  using Key = std::pair<unsigned, unsigned>;
  using Terms = std::map<Key, F>;

  WeylOp() : pair_(xd_pair()) {}
  explicit WeylOp(GeneratorPair pair) : pair_(std::move(pair)) {}

  static WeylOp scalar(const F& c, GeneratorPair pair = xd_pair()) { return term(c, 0, 0, std::move(pair)); }
  static WeylOp term(const F& c, unsigned i, unsigned j, GeneratorPair pair = xd_pair()) {
    WeylOp out(std::move(pair));
    out.add(i, j, c);
    return out;
  }
  static WeylOp raise(GeneratorPair pair = xd_pair(), unsigned k = 1) {
    return term(FieldTraits<F>::from(Rational(1)), k, 0, std::move(pair));
  }
  static WeylOp lower(GeneratorPair pair = xd_pair(), unsigned k = 1) {
    return term(FieldTraits<F>::from(Rational(1)), 0, k, std::move(pair));
  }
  // Embeds p(E) with E the raise generator.
  static WeylOp from_raise_poly(const Poly<F>& p, GeneratorPair pair = xd_pair()) {
    WeylOp out(std::move(pair));
    for (size_t k = 0; k < p.size(); ++k) out.add(static_cast<unsigned>(k), 0, p.coeffs()[k]);
    return out;
  }
  static WeylOp from_lower_poly(const Poly<F>& p, GeneratorPair pair = xd_pair()) {
    WeylOp out(std::move(pair));
    for (size_t k = 0; k < p.size(); ++k) out.add(0, static_cast<unsigned>(k), p.coeffs()[k]);
    return out;
  }

  const GeneratorPair& pair() const { return pair_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  F coeff(unsigned i, unsigned j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? FieldTraits<F>::from(Rational(0)) : it->second;
  }

  void add(unsigned i, unsigned j, const F& c) {
    if (dmod::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(Key{i, j}, c);
    if (!inserted) {
      it->second = it->second + c;
      if (dmod::is_zero(it->second)) terms_.erase(it);
    }
  }

  unsigned max_lower() const {
    unsigned m = 0;
    for (const auto& [k, v] : terms_) m = std::max(m, k.second);
    return m;
  }
  unsigned max_raise() const {
    unsigned m = 0;
    for (const auto& [k, v] : terms_) m = std::max(m, k.first);
    return m;
  }

  // Coefficient of lower^j as a polynomial in the raise generator.
  Poly<F> lower_coeff(unsigned j) const {
    std::vector<F> c;
    for (const auto& [k, v] : terms_) {
      if (k.second != j) continue;
      if (c.size() <= k.first) c.resize(k.first + 1, FieldTraits<F>::from(Rational(0)));
      c[k.first] = v;
    }
    return Poly<F>(std::move(c), pair_.raise);
  }

  WeylOp operator-() const {
    WeylOp out(pair_);
    for (const auto& [k, v] : terms_) out.terms_.emplace(k, FieldTraits<F>::from(Rational(-1)) * v);
    return out;
  }
  WeylOp& operator+=(const WeylOp& o) {
    check_pair(o);
    for (const auto& [k, v] : o.terms_) add(k.first, k.second, v);
    return *this;
  }
  WeylOp& operator-=(const WeylOp& o) {
    check_pair(o);
    for (const auto& [k, v] : o.terms_) add(k.first, k.second, FieldTraits<F>::from(Rational(-1)) * v);
    return *this;
  }
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(const F& s, const WeylOp& a) {
    WeylOp out(a.pair_);
    if (dmod::is_zero(s)) return out;
    for (const auto& [k, v] : a.terms_) out.terms_.emplace(k, s * v);
    return out;
  }
  friend bool operator==(const WeylOp& a, const WeylOp& b) { return a.pair_ == b.pair_ && a.terms_ == b.terms_; }
  friend bool operator!=(const WeylOp& a, const WeylOp& b) { return !(a == b); }

  WeylOp plus_scalar(const F& s) const {
    WeylOp out = *this;
    out.add(0, 0, s);
    return out;
  }

  template <class G, class Fn>
  WeylOp<G> map_coeffs(Fn&& fn) const {
    WeylOp<G> out(pair_);
    for (const auto& [k, v] : terms_) out.add(k.first, k.second, fn(v));
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      auto [i, j] = it->first;
      std::string c = coeff_to_string(it->second);
      bool negative = !c.empty() && c[0] == '-';
      if (negative) c = c.substr(1);
      if (c.find_first_of("+- ") != std::string::npos) c = "(" + c + ")";
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      first = false;
      std::string mono;
      auto gen = [&](const std::string& s, unsigned e) {
        if (e == 0) return;
        if (!mono.empty()) mono += "*";
        mono += s;
        if (e > 1) mono += "^" + std::to_string(e);
      };
      gen(pair_.raise, i);
      gen(pair_.lower, j);
      if (mono.empty())
        os << c;
      else if (c == "1")
        os << mono;
      else
        os << c << "*" << mono;
    }
    return os.str();
  }

 private:
  void check_pair(const WeylOp& o) const {
    if (o.pair_ != pair_) throw Error("mismatched generator pairs: (" + pair_.raise + "," + pair_.lower + ") vs (" +
                                      o.pair_.raise + "," + o.pair_.lower + ")");
  }

  GeneratorPair pair_;
  Terms terms_;
};

using QWeyl = WeylOp<Rational>;
using CWeyl = WeylOp<Complex>;

// lower^m * raise^n = sum_k k! C(m,k) C(n,k) c^k raise^(n-k) lower^(m-k)
Rational reorder_coeff(unsigned m, unsigned n, unsigned k, const Rational& c);

template <class F>
WeylOp<F> weyl_mul(const WeylOp<F>& a, const WeylOp<F>& b) {
  if (a.pair() != b.pair()) throw Error("mismatched generator pairs in product");
  WeylOp<F> out(a.pair());
  const Rational& c = a.pair().c;
  std::map<std::tuple<unsigned, unsigned, unsigned>, F> cache;
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      const unsigned j = ka.second, m = kb.first;
      F base = va * vb;
      for (unsigned k = 0; k <= std::min(j, m); ++k) {
        auto key = std::make_tuple(j, m, k);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, FieldTraits<F>::from(reorder_coeff(j, m, k, c))).first;
        out.add(ka.first + m - k, j - k + kb.second, base * it->second);
      }
    }
  }
  return out;
}

template <class F>
WeylOp<F> operator*(const WeylOp<F>& a, const WeylOp<F>& b) {
  return weyl_mul(a, b);
}

template <class F>
WeylOp<F> pow(const WeylOp<F>& a, unsigned e) {
  WeylOp<F> out = WeylOp<F>::scalar(FieldTraits<F>::from(Rational(1)), a.pair());
  for (unsigned i = 0; i < e; ++i) out = weyl_mul(out, a);
  return out;
}

template <class F>
WeylOp<F> commutator(const WeylOp<F>& a, const WeylOp<F>& b) {
  return weyl_mul(a, b) - weyl_mul(b, a);
}

// A word is a product of generators in written order (true = raise).
struct Word {
  Rational coeff;
  std::vector<bool> letters;
};

template <class F>
WeylOp<F> normal_form(const std::vector<Word>& words, const GeneratorPair& pair) {
  WeylOp<F> out(pair);
  const auto e = WeylOp<F>::raise(pair), f = WeylOp<F>::lower(pair);
  for (const auto& w : words) {
    WeylOp<F> prod = WeylOp<F>::scalar(FieldTraits<F>::from(w.coeff), pair);
    for (bool r : w.letters) prod = weyl_mul(prod, r ? e : f);
    out += prod;
  }
  return out;
}

// Words read back from a normal-ordered operator.
inline std::vector<Word> to_words(const WeylOp<Rational>& op) {
  std::vector<Word> out;
  for (const auto& [k, v] : op.terms()) {
    Word w{v, {}};
    w.letters.insert(w.letters.end(), k.first, true);
    w.letters.insert(w.letters.end(), k.second, false);
    out.push_back(std::move(w));
  }
  return out;
}

template <class F>
WeylOp<F> change_basis(const WeylOp<F>& op, const GeneratorPair& to, const AffineSubstitution& sub) {
  const Rational det = sub.p * sub.t - sub.q * sub.s;
  if (sgn(det) == 0) throw Error("non-invertible substitution");
  // [s E' + t F', p E' + q F'] = (t p - s q) [F', E'] must equal c.
  if (Rational(sub.t * sub.p - sub.s * sub.q) * to.c != op.pair().c)
    throw Error("substitution does not preserve the commutation relation");
  auto img = [&](const Rational& a, const Rational& b, const Rational& c0) {
    WeylOp<F> w(to);
    w.add(1, 0, FieldTraits<F>::from(a));
    w.add(0, 1, FieldTraits<F>::from(b));
    w.add(0, 0, FieldTraits<F>::from(c0));
    return w;
  };
  const WeylOp<F> R = img(sub.p, sub.q, sub.r), L = img(sub.s, sub.t, sub.u);
  std::vector<WeylOp<F>> rp{WeylOp<F>::scalar(FieldTraits<F>::from(Rational(1)), to)}, lp = rp;
  WeylOp<F> out(to);
  for (const auto& [k, v] : op.terms()) {
    while (rp.size() <= k.first) rp.push_back(weyl_mul(rp.back(), R));
    while (lp.size() <= k.second) lp.push_back(weyl_mul(lp.back(), L));
    out += v * weyl_mul(rp[k.first], lp[k.second]);
  }
  return out;
}

// Normal-ordered pi_j(G) = E^j F^j as a polynomial in G: prod_{k<j} (G - k c).
QPoly grade_product(unsigned j, const Rational& c);

template <class F>
WeylOp<F> grade_power(const GeneratorPair& pair, unsigned m) {
  return pow(weyl_mul(WeylOp<F>::raise(pair), WeylOp<F>::lower(pair)), m);
}

unsigned order_of(const QWeyl& op, OrderSpec spec);
bool is_monic(const QWeyl& k, OrderSpec spec);

template <class F>
struct Division {
  WeylOp<F> quotient;
  Poly<F> remainder;
};

// f = q*k + r with r in the order-zero part; verified by re-multiplication.
Division<Rational> divide_first_order(const QWeyl& f, const QWeyl& k, OrderSpec spec, bool verify = true);

// Division by kappa(E)*F + v(E) with polynomial kappa; fails unless every
// eliminated coefficient is divisible by kappa.
Division<Rational> divide_exact_first_order(const QWeyl& f, const QWeyl& k, OrderSpec spec);

// Remainder of f modulo G - lambda (terms E^i F^j need i >= j).
QPoly graded_remainder(const QWeyl& f, const Rational& lambda);

// Smallest k with E^k * op expressible as sum E^a p(G); 0 if already so.
unsigned graded_defect(const QWeyl& op);

// Same operator written with the pair's roles exchanged, e.g. (X, D) <-> (D, X).
QWeyl swap_orientation(const QWeyl& op);

// Realization on Q[x]: X multiplies, D differentiates.
QPoly apply_to_poly(const QWeyl& op, const QPoly& p);

}  // namespace dmod
