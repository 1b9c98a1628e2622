#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmod/adic.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

enum class DivisorKind { Lower, Graded, DoublyConfluent };

// First-order divisor K: the lower generator of the working orientation,
// G - lambda, or the non-monic X D^2 + (b - X) D - a of the doubly confluent case.
struct Divisor {
  DivisorKind kind = DivisorKind::Lower;
  Rational lambda;
  Rational a, b, c, q;

  static Divisor lower() { return {}; }
  static Divisor graded(const Rational& lambda) { return {DivisorKind::Graded, lambda, 0, 0, 0, 0}; }
  static Divisor doubly_confluent(const Rational& a, const Rational& b, const Rational& c, const Rational& q) {
    return {DivisorKind::DoublyConfluent, 0, a, b, c, q};
  }
};

struct SolveConfig {
  QWeyl L;
  Divisor K;
  OrderSpec spec;
  QPoly seed;
  unsigned precision = 16;
  unsigned max_iterations = 0;  // 0 picks a bound from the precision
};

enum class PointKind { Ordinary, RegularSingular, Other };
std::string to_string(PointKind k);

struct IndicialData {
  QPoly polynomial;
  std::vector<Complex> roots;
  std::vector<Rational> rational_roots;
  unsigned left_factor = 0;  // the raise power multiplied on the left
  Rational shift = 1;        // grade shift of the pair

  // i(lambda + m * shift) != 0 for every integer m >= 1.
  bool non_resonant(const Rational& lambda) const;
};

struct SolveResult {
  AdicSeries series;
  std::vector<Valuation> residual_valuations;
  bool converged = false;
  std::string divisor;
  std::optional<Rational> exponent;
  long tangent_shift = 0;
  unsigned left_factor = 0;
};

// Remainder map S -> R with L S = Q K + R, cached and verified per monomial.
class RemainderMap {
 public:
  explicit RemainderMap(const SolveConfig& cfg);

  const GeneratorPair& pair() const { return working_.pair(); }
  const std::string& generator() const { return working_.pair().raise; }
  const QWeyl& working_operator() const { return working_; }
  std::string describe() const;

  const QPoly& monomial(unsigned m);
  QPoly apply(const QPoly& s);
  long shift();
  Rational tangent_coeff(unsigned m);
  QPoly tangent_apply(const QPoly& s);
  // Preimage of r under the tangential map, dropping powers >= limit.
  QPoly tangent_inverse(const QPoly& r, unsigned limit);
  // Full product check L S = Q K + R for a given S.
  QPoly verified_apply(const QPoly& s);

 private:
  QPoly compute_monomial(unsigned m) const;

  SolveConfig cfg_;
  QWeyl working_;
  QWeyl divisor_op_;
  unsigned left_factor_ = 0;
  std::map<unsigned, QPoly> cache_;
  std::optional<long> shift_;
};

PointKind classify_point(const QWeyl& L, OrderSpec spec = OrderSpec::standard());
IndicialData indicial_polynomial(const QWeyl& L, unsigned digits = 30);

QPoly remainder_map(const SolveConfig& cfg, const QPoly& s);
QPoly tangential_apply(const SolveConfig& cfg, const QPoly& s);
QPoly tangential_inverse(const SolveConfig& cfg, const QPoly& r);

SolveResult newton_iterate(const SolveConfig& cfg);

SolveResult solve_ordinary(const QWeyl& L, const QPoly& seed, unsigned N);
SolveResult solve_frobenius(const QWeyl& L, const Rational& lambda, unsigned N);
SolveResult solve_dual(const QWeyl& L, const QPoly& seed, unsigned N);
SolveResult solve_doubly_confluent(const QWeyl& L, const Divisor& K, const QPoly& seed, unsigned N);

// Minimal modulus of the relevant leading-coefficient roots; nullopt means infinite.
std::optional<BigFloat> radius_bound(const QWeyl& L, unsigned digits = 30);

// X K + c D + q with K = X D^2 + (b - X) D - a.
QWeyl doubly_confluent_operator(const Rational& a, const Rational& b, const Rational& c, const Rational& q);
QWeyl doubly_confluent_divisor(const Rational& a, const Rational& b);

}  // namespace dmod
