#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmod/ore.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

enum class HeunVariant { Heun, HeunHat, Confluent };
std::string to_string(HeunVariant v);
HeunVariant parse_heun_variant(const std::string& s);

struct HeunParams {
  Rational a, alpha, beta, gamma, delta, epsilon;
  HeunVariant variant = HeunVariant::Heun;

  // alpha + beta - gamma - delta - epsilon + 1 = 0 for both Heun variants.
  void check() const;
};

// Constants c1, c2, c3 of the chosen variant.
struct DivisionSeeds {
  Rational c1, c2, c3;
};
DivisionSeeds division_seeds(const HeunParams& p);

// Heun operator (or its confluent form) and the hypergeometric divisor of the variant.
QWeyl heun_operator(const HeunParams& p);
QWeyl heun_divisor(const HeunParams& p);
// X D + gamma, or (X - 1) D + delta - 1 for the hatted variant.
QWeyl ladder_operator(const HeunParams& p);
// X, or X - 1 for the hatted variant.
QWeyl ladder_multiplier(const HeunParams& p);
std::string ladder_name(const HeunParams& p);

// D (X D + b1 - 1)...(X D + bq - 1) / scale - (X D + a1)...(X D + ap).
template <class F>
WeylOp<F> generalized_hypergeometric(const std::vector<F>& upper, const std::vector<F>& lower,
                                     const F& scale = FieldTraits<F>::from(Rational(1))) {
  const F one = FieldTraits<F>::from(Rational(1));
  WeylOp<F> euler = WeylOp<F>::term(one, 1, 1);
  WeylOp<F> left = (one / scale) * WeylOp<F>::lower();
  for (const auto& b : lower) left = weyl_mul(left, euler.plus_scalar(b - one));
  WeylOp<F> right = WeylOp<F>::scalar(one);
  for (const auto& a : upper) right = weyl_mul(right, euler.plus_scalar(a));
  return left - right;
}

// H s = (P m + Q) Hd + R, with P, Q, R polynomials in the ladder operator.
struct ABasisTriple {
  QPoly P, Q, R;
};

// Substitutes the ladder operator into a polynomial.
QWeyl eval_ladder(const HeunParams& p, const QPoly& s);
ABasisTriple div_in_A(const HeunParams& p, const QPoly& s);

using QMatrix = std::vector<std::vector<Rational>>;
enum class MatrixBasis { Ladder, X };

// Column j holds the coefficients of the remainder of the j-th basis element.
QMatrix remainder_matrix(const HeunParams& p, unsigned n, MatrixBasis basis = MatrixBasis::Ladder);
QPoly characteristic_polynomial(const QMatrix& m);

struct EigenSolution {
  Scalar qstar;
  std::vector<Scalar> sstar;  // lowest power first, leading coefficient 1
  std::vector<Scalar> e_list;
  BigFloat residual = 0;
  bool exact = true;
};

std::vector<EigenSolution> eigen_solve(const QMatrix& m, unsigned digits = 50);

// Roots r of sstar in the ladder variable give e = gamma - r.
std::vector<Scalar> extract_e(const std::vector<Scalar>& sstar, const Rational& gamma, unsigned digits = 50);

// Coefficient description of a power series in x.
struct SeriesSpec {
  enum class Kind { Hypergeometric, Exponential, Product, Apply, EulerFactors, Scale };
  Kind kind = Kind::Hypergeometric;
  std::vector<Scalar> upper, lower;  // hypergeometric parameters
  std::vector<Scalar> e;             // (X D / e + 1) factors
  Scalar scale = 1;                  // argument scale, or constant factor for Scale
  QWeyl op;
  std::vector<std::shared_ptr<SeriesSpec>> children;

  static SeriesSpec hypergeometric(std::vector<Scalar> upper, std::vector<Scalar> lower, Scalar scale = 1);
  static SeriesSpec exponential(Scalar scale);
  static SeriesSpec product(SeriesSpec a, SeriesSpec b);
  static SeriesSpec apply(QWeyl op, SeriesSpec inner);
  static SeriesSpec euler_factors(std::vector<Scalar> e, SeriesSpec inner);
  static SeriesSpec scaled(Scalar c, SeriesSpec inner);

  bool exact() const;
};

std::vector<Rational> series_coefficients(const SeriesSpec& s, unsigned n);
std::vector<Complex> series_coefficients_float(const SeriesSpec& s, unsigned n);

struct IdentityCheck {
  bool equal = false;
  bool exact = true;
  std::optional<unsigned> mismatch;
  std::string lhs, rhs;
  BigFloat max_error = 0;
};

// Compares coefficients of x^0..x^(n-1); tolerance 10^(-digits/2) relative in float mode.
IdentityCheck verify_identity_series(const SeriesSpec& lhs, const SeriesSpec& rhs, unsigned n, unsigned digits = 50);

struct FactorizationCheck {
  bool ok = false;
  bool exact = true;
  BigFloat norm = 0;
  std::string remainder;
};

// Right division of gen by heun - qstar in C(x)[D].
FactorizationCheck verify_factorization(const QWeyl& gen, const QWeyl& heun, const Rational& qstar);
FactorizationCheck verify_factorization(const CWeyl& gen, const QWeyl& heun, const Complex& qstar,
                                        unsigned digits = 50);

// Generalized hypergeometric operator annihilating S* applied to the base function of the variant.
QWeyl factorization_target(const HeunParams& p, const std::vector<Rational>& e);
CWeyl factorization_target(const HeunParams& p, const std::vector<Complex>& e, unsigned digits = 50);

struct HeunEigenCheck {
  EigenSolution solution;  // e_list filled
  std::optional<FactorizationCheck> factorization;
  std::optional<IdentityCheck> identity;
};

struct HeunEigenReport {
  QMatrix matrix;
  QPoly charpoly;
  std::vector<HeunEigenCheck> eigen;
  bool verified = false;
};

// Degree from epsilon = -n (delta = -n for the confluent variant) when omitted.
unsigned invariant_degree(const HeunParams& p);
// Remainder matrix, eigenpairs, e extraction, then the factorization and series identity checks
// for the variants that carry a hypergeometric target.
HeunEigenReport heun_eigen(const HeunParams& p, std::optional<unsigned> degree = {}, unsigned digits = 50,
                           unsigned order = 30);

}  // namespace dmod
