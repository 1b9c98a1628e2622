#include "dmod/heun.hpp"

#include <algorithm>

#include "dmod/newton.hpp"

namespace dmod {

std::string to_string(HeunVariant v) {
  switch (v) {
    case HeunVariant::Heun:
      return "heun";
    case HeunVariant::HeunHat:
      return "heun-hat";
    case HeunVariant::Confluent:
      return "confluent";
  }
  return "?";
}

HeunVariant parse_heun_variant(const std::string& s) {
  if (s == "heun") return HeunVariant::Heun;
  if (s == "heun-hat") return HeunVariant::HeunHat;
  if (s == "confluent") return HeunVariant::Confluent;
  throw Error("unknown Heun variant '" + s + "'");
}

void HeunParams::check() const {
  if (variant == HeunVariant::Confluent) return;
  if (sgn(alpha + beta - gamma - delta - epsilon + 1) != 0)
    throw Error("Heun constraint violated: alpha + beta - gamma - delta - epsilon + 1 must be 0");
}

DivisionSeeds division_seeds(const HeunParams& p) {
  const Rational ab = p.alpha * p.beta;
  switch (p.variant) {
    case HeunVariant::Heun:
      return {ab * p.a - p.gamma * p.epsilon * (p.a - 1), ab + p.gamma * (1 - p.delta - p.epsilon),
              p.delta + p.epsilon - p.gamma - 1};
    case HeunVariant::HeunHat:
      return {ab * p.a - (p.delta - 1) * p.epsilon * p.a, ab + (p.gamma + p.epsilon) * (1 - p.delta),
              p.delta - p.epsilon - p.gamma - 1};
    case HeunVariant::Confluent:
      // c1 as in the commutator identity; c2 is the constant of the first remainder.
      return {(p.alpha - p.gamma) * p.epsilon, p.alpha * p.epsilon - p.delta * p.gamma, 0};
  }
  throw Error("unknown Heun variant");
}

namespace {

QPoly xpoly(std::vector<Rational> c) { return QPoly(std::move(c), "X"); }

// p2(X) D^2 + p1(X) D + p0(X)
QWeyl second_order(const QPoly& p2, const QPoly& p1, const QPoly& p0) {
  QWeyl out;
  const QPoly* parts[3] = {&p0, &p1, &p2};
  for (unsigned j = 0; j < 3; ++j)
    for (size_t i = 0; i < parts[j]->size(); ++i) out.add(static_cast<unsigned>(i), j, parts[j]->coeffs()[i]);
  return out;
}

const QPoly kX = xpoly({0, 1});
const QPoly kXm1 = xpoly({-1, 1});

}  // namespace

QWeyl heun_operator(const HeunParams& p) {
  p.check();
  if (p.variant == HeunVariant::Confluent) {
    QPoly xx1 = kX * kXm1;
    QPoly first = kXm1.scaled(p.gamma) + kX.scaled(p.delta) + xx1.scaled(p.epsilon);
    return second_order(xx1, first, kX.scaled(p.alpha * p.epsilon));
  }
  QPoly xma = xpoly({-p.a, 1});
  QPoly first = (kXm1 * xma).scaled(p.gamma) + (kX * kXm1).scaled(p.epsilon) + (kX * xma).scaled(p.delta);
  return second_order(kX * kXm1 * xma, first, kX.scaled(p.alpha * p.beta));
}

QWeyl heun_divisor(const HeunParams& p) {
  p.check();
  switch (p.variant) {
    case HeunVariant::Heun:
      return second_order(kX * kXm1, kXm1.scaled(p.gamma) + kX.scaled(p.delta + p.epsilon),
                          QPoly::constant(p.alpha * p.beta, "X"));
    case HeunVariant::HeunHat:
      return second_order(kX * kXm1, kXm1.scaled(p.gamma + p.epsilon) + kX.scaled(p.delta),
                          QPoly::constant(p.alpha * p.beta, "X"));
    case HeunVariant::Confluent:
      return second_order(kX, xpoly({p.gamma, p.epsilon}), QPoly::constant(p.alpha * p.epsilon, "X"));
  }
  throw Error("unknown Heun variant");
}

QWeyl ladder_operator(const HeunParams& p) {
  if (p.variant == HeunVariant::HeunHat) return second_order({}, kXm1, QPoly::constant(p.delta - 1, "X"));
  return second_order({}, kX, QPoly::constant(p.gamma, "X"));
}

QWeyl ladder_multiplier(const HeunParams& p) {
  return QWeyl::from_raise_poly(p.variant == HeunVariant::HeunHat ? kXm1 : kX);
}

std::string ladder_name(const HeunParams& p) { return p.variant == HeunVariant::HeunHat ? "Ahat_dag" : "A"; }

QWeyl eval_ladder(const HeunParams& p, const QPoly& s) {
  const QWeyl g = ladder_operator(p);
  QWeyl out;
  for (size_t k = s.size(); k-- > 0;) out = weyl_mul(out, g).plus_scalar(s.coeffs()[k]);
  return out;
}

namespace {

struct Recursion {
  QPoly T, U;
  ABasisTriple seed;
};

Recursion recursion_for(const HeunParams& p) {
  const std::string g = ladder_name(p);
  auto poly = [&](std::vector<Rational> c) { return QPoly(std::move(c), g); };
  const DivisionSeeds c = division_seeds(p);
  switch (p.variant) {
    case HeunVariant::Heun:
      return {poly({c.c2, c.c3, 1}), poly({-1, 1}) * poly({-p.gamma, 1}),
              {poly({1}), poly({-p.a}), poly({c.c1, p.epsilon * (p.a - 1)})}};
    case HeunVariant::HeunHat:
      return {poly({c.c2, -c.c3, 1}), poly({0, -1}) * poly({1 - p.delta, 1}),
              {poly({1}), poly({1 - p.a}), poly({c.c1, p.epsilon * p.a})}};
    case HeunVariant::Confluent:
      return {poly({c.c1, p.epsilon}), -(poly({-1, 1}) * poly({-p.gamma, 1})),
              {poly({1}), poly({-1}), poly({c.c2, p.delta})}};
  }
  throw Error("unknown Heun variant");
}

void verify_triple(const HeunParams& p, const QWeyl& H, const QWeyl& Hd, const QPoly& s, const ABasisTriple& t) {
  QWeyl lhs = weyl_mul(H, eval_ladder(p, s));
  QWeyl rhs = weyl_mul(weyl_mul(eval_ladder(p, t.P), ladder_multiplier(p)) + eval_ladder(p, t.Q), Hd) +
              eval_ladder(p, t.R);
  if (lhs != rhs) throw Error("ladder-basis division failed re-multiplication check");
}

}  // namespace

ABasisTriple div_in_A(const HeunParams& p, const QPoly& s) {
  if (s.is_zero()) throw Error("dividend polynomial must be nonzero");
  Recursion rec = recursion_for(p);
  const std::string gname = ladder_name(p);
  const QPoly g({0, 1}, gname), one({1}, gname);
  QPoly sg = s.with_gen(gname);
  ABasisTriple cur = rec.seed, out{QPoly({}, gname), QPoly({}, gname), QPoly({}, gname)};
  for (size_t k = 0; k < sg.size(); ++k) {
    if (k > 0) cur = {(g - one) * cur.P, (g + one) * cur.Q, g * cur.R - rec.U * cur.P - rec.T * cur.Q};
    const Rational& c = sg.coeffs()[k];
    if (sgn(c) == 0) continue;
    out.P += cur.P.scaled(c);
    out.Q += cur.Q.scaled(c);
    out.R += cur.R.scaled(c);
  }
  verify_triple(p, heun_operator(p), heun_divisor(p), sg, out);
  return out;
}

QMatrix remainder_matrix(const HeunParams& p, unsigned n, MatrixBasis basis) {
  QMatrix m(n + 1, std::vector<Rational>(n + 1));
  if (basis == MatrixBasis::Ladder) {
    const std::string gname = ladder_name(p);
    for (unsigned j = 0; j <= n; ++j) {
      QPoly r = div_in_A(p, QPoly::monomial(Rational(1), j, gname)).R;
      if (r.degree() > static_cast<int>(n))
        throw Error(std::string("subspace of degree ") + std::to_string(n) + " is not invariant: needs " +
                    (p.variant == HeunVariant::Confluent ? "delta" : "epsilon") + " = -" + std::to_string(n));
      for (size_t i = 0; i < r.size(); ++i) m[i][j] = r.coeffs()[i];
    }
    return m;
  }
  SolveConfig cfg{heun_operator(p), Divisor::lower(), OrderSpec::standard(), QPoly({1}, "X"), 1, 0};
  RemainderMap psi(cfg);
  for (unsigned j = 0; j <= n; ++j) {
    const QPoly& r = psi.monomial(j);
    if (r.degree() > static_cast<int>(n))
      throw Error("polynomial subspace of degree " + std::to_string(n) + " is not invariant: needs alpha = -" +
                  std::to_string(n) + " or beta = -" + std::to_string(n));
    for (size_t i = 0; i < r.size(); ++i) m[i][j] = r.coeffs()[i];
  }
  return m;
}

QPoly characteristic_polynomial(const QMatrix& m) {
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error("matrix must be square");
  // Faddeev-LeVerrier: det(t I - m) = sum c_k t^k
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix mk(n, std::vector<Rational>(n));
  for (size_t k = 1; k <= n; ++k) {
    QMatrix prod(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Rational acc = 0;
        for (size_t l = 0; l < n; ++l) acc += m[i][l] * mk[l][j];
        prod[i][j] = acc;
      }
    for (size_t i = 0; i < n; ++i) prod[i][i] += c[n - k + 1];
    mk = prod;
    Rational tr = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) tr += m[i][l] * mk[l][i];
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return QPoly(std::move(c), "q");
}

namespace {

std::vector<std::vector<Rational>> exact_nullspace(QMatrix a) {
  const size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<size_t> pivot_cols;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rational>> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<Rational> v(cols);
    v[free] = 1;
    for (size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
void normalize_leading(std::vector<F>& v) {
  for (size_t k = v.size(); k-- > 0;) {
    if (!is_zero(v[k])) {
      F inv = FieldTraits<F>::from(Rational(1)) / v[k];
      for (auto& x : v) x = x * inv;
      return;
    }
  }
  throw Error("zero eigenvector");
}

BigFloat tolerance(unsigned digits) { return boost::multiprecision::pow(BigFloat(10), -static_cast<int>(digits / 2)); }

// Null vectors of m - q I by complete pivoting; tiny trailing pivots mark free variables.
std::vector<std::vector<Complex>> float_nullspace(const QMatrix& m, const Complex& q, unsigned digits) {
  const size_t n = m.size();
  std::vector<std::vector<Complex>> b(n, std::vector<Complex>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) b[i][j] = Complex(m[i][j]) - (i == j ? q : Complex(0));
  std::vector<size_t> colperm(n);
  for (size_t j = 0; j < n; ++j) colperm[j] = j;
  BigFloat scale = 0;
  for (const auto& row : b)
    for (const auto& v : row) scale = std::max(scale, abs(v));
  if (scale == 0) scale = 1;
  const BigFloat tol = tolerance(digits) * scale;
  size_t rank = 0;
  for (size_t k = 0; k < n; ++k) {
    size_t pi = k, pj = k;
    BigFloat best = -1;
    for (size_t i = k; i < n; ++i)
      for (size_t j = k; j < n; ++j)
        if (BigFloat a = abs(b[i][j]); a > best) best = a, pi = i, pj = j;
    if (best <= tol) break;
    std::swap(b[k], b[pi]);
    for (auto& row : b) std::swap(row[k], row[pj]);
    std::swap(colperm[k], colperm[pj]);
    for (size_t i = k + 1; i < n; ++i) {
      Complex f = b[i][k] / b[k][k];
      for (size_t j = k; j < n; ++j) b[i][j] -= f * b[k][j];
    }
    ++rank;
  }
  if (rank == n) throw Error("defective eigenvalue: no eigenvector at tolerance");
  std::vector<std::vector<Complex>> out;
  for (size_t free = rank; free < n; ++free) {
    std::vector<Complex> y(n);
    y[free] = Complex(1);
    for (size_t k = rank; k-- > 0;) {
      Complex acc(0);
      for (size_t j = k + 1; j < n; ++j) acc += b[k][j] * y[j];
      y[k] = -acc / b[k][k];
    }
    std::vector<Complex> v(n);
    for (size_t j = 0; j < n; ++j) v[colperm[j]] = y[j];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<EigenSolution> eigen_solve(const QMatrix& m, unsigned digits) {
  const size_t n = m.size();
  if (n == 0) throw Error("empty matrix");
  QPoly chi = characteristic_polynomial(m);
  std::vector<EigenSolution> out;

  std::vector<Rational> rational = rational_roots(chi, std::max(digits, 60u));
  std::vector<Rational> distinct;
  QPoly rest = chi;
  for (const auto& r : rational) {
    rest = divrem(rest, QPoly({-r, 1}, "q")).first;
    if (std::find(distinct.begin(), distinct.end(), r) == distinct.end()) distinct.push_back(r);
  }
  for (const auto& r : distinct) {
    QMatrix shifted = m;
    for (size_t i = 0; i < n; ++i) shifted[i][i] -= r;
    auto basis = exact_nullspace(shifted);
    if (basis.empty()) throw Error("defective eigenvalue: exact nullspace is empty");
    for (auto& v : basis) {
      normalize_leading(v);
      EigenSolution s;
      s.qstar = r;
      for (const auto& x : v) s.sstar.emplace_back(x);
      // exact residual m v - r v
      for (size_t i = 0; i < n; ++i) {
        Rational acc = -r * v[i];
        for (size_t j = 0; j < n; ++j) acc += m[i][j] * v[j];
        if (sgn(acc) != 0) throw Error("exact eigenvector residual is nonzero");
      }
      out.push_back(std::move(s));
    }
  }
  if (rest.degree() < 1) return out;

  const unsigned work = std::max(digits, 50u);
  PrecisionScope scope(work + 20);
  std::vector<Complex> roots = poly_roots(rest, work + 10);
  std::vector<Complex> seen;
  const BigFloat tol = tolerance(work);
  for (const auto& q : roots) {
    bool dup = false;
    for (const auto& s : seen) dup = dup || abs(s - q) < tol;
    if (dup) continue;
    seen.push_back(q);
    for (auto& v : float_nullspace(m, q, work)) {
      normalize_leading(v);
      EigenSolution s;
      s.exact = false;
      s.qstar = q;
      BigFloat res = 0;
      for (size_t i = 0; i < n; ++i) {
        Complex acc = -(q * v[i]);
        for (size_t j = 0; j < n; ++j) acc += Complex(m[i][j]) * v[j];
        res = std::max(res, abs(acc));
      }
      s.residual = res;
      for (const auto& x : v) s.sstar.emplace_back(x);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Scalar> extract_e(const std::vector<Scalar>& sstar, const Rational& gamma, unsigned digits) {
  bool exact = std::all_of(sstar.begin(), sstar.end(), [](const Scalar& s) { return s.is_exact(); });
  std::vector<Scalar> out;
  const unsigned work = std::max(digits, 50u);
  PrecisionScope scope(work + 20);
  const BigFloat tol = tolerance(work);
  auto degenerate = [] { return Error("degenerate factor: root equals gamma, so e = 0 cannot be normalized"); };
  if (exact) {
    std::vector<Rational> c;
    for (const auto& s : sstar) c.push_back(s.exact());
    QPoly s(std::move(c), "A");
    if (s.is_zero()) throw Error("eigenvector polynomial must be nonzero");
    auto roots = rational_roots(s, std::max(work, 60u));
    if (static_cast<int>(roots.size()) == s.degree()) {
      for (const auto& r : roots) {
        if (r == gamma) throw degenerate();
        out.emplace_back(Rational(gamma - r));
      }
      return out;
    }
    for (const auto& r : poly_roots(s, work + 10)) {
      Complex e = Complex(gamma) - r;
      if (abs(e) < tol) throw degenerate();
      out.emplace_back(e);
    }
    return out;
  }
  std::vector<Complex> c;
  for (const auto& s : sstar) c.push_back(s.approx());
  CPoly s(std::move(c), "A");
  if (s.is_zero()) throw Error("eigenvector polynomial must be nonzero");
  for (const auto& r : poly_roots(s, work + 10)) {
    Complex e = Complex(gamma) - r;
    if (abs(e) < tol) throw degenerate();
    out.emplace_back(e);
  }
  return out;
}

SeriesSpec SeriesSpec::hypergeometric(std::vector<Scalar> upper, std::vector<Scalar> lower, Scalar scale) {
  SeriesSpec s;
  s.kind = Kind::Hypergeometric;
  s.upper = std::move(upper);
  s.lower = std::move(lower);
  s.scale = std::move(scale);
  return s;
}

SeriesSpec SeriesSpec::exponential(Scalar scale) {
  SeriesSpec s;
  s.kind = Kind::Exponential;
  s.scale = std::move(scale);
  return s;
}

SeriesSpec SeriesSpec::product(SeriesSpec a, SeriesSpec b) {
  SeriesSpec s;
  s.kind = Kind::Product;
  s.children = {std::make_shared<SeriesSpec>(std::move(a)), std::make_shared<SeriesSpec>(std::move(b))};
  return s;
}

SeriesSpec SeriesSpec::apply(QWeyl op, SeriesSpec inner) {
  if (op.pair() != xd_pair()) throw Error("series operators must use the (X, D) pair");
  SeriesSpec s;
  s.kind = Kind::Apply;
  s.op = std::move(op);
  s.children = {std::make_shared<SeriesSpec>(std::move(inner))};
  return s;
}

SeriesSpec SeriesSpec::euler_factors(std::vector<Scalar> e, SeriesSpec inner) {
  SeriesSpec s;
  s.kind = Kind::EulerFactors;
  s.e = std::move(e);
  s.children = {std::make_shared<SeriesSpec>(std::move(inner))};
  return s;
}

SeriesSpec SeriesSpec::scaled(Scalar c, SeriesSpec inner) {
  SeriesSpec s;
  s.kind = Kind::Scale;
  s.scale = std::move(c);
  s.children = {std::make_shared<SeriesSpec>(std::move(inner))};
  return s;
}

bool SeriesSpec::exact() const {
  auto all_exact = [](const std::vector<Scalar>& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_exact(); });
  };
  if (!all_exact(upper) || !all_exact(lower) || !all_exact(e) || !scale.is_exact()) return false;
  return std::all_of(children.begin(), children.end(), [](const auto& c) { return c->exact(); });
}

namespace {

template <class F>
F lift(const Scalar& s);
template <>
Rational lift<Rational>(const Scalar& s) {
  return s.exact();
}
template <>
Complex lift<Complex>(const Scalar& s) {
  return s.approx();
}

template <class F>
bool vanishes(const F& x) {
  if constexpr (FieldTraits<F>::exact)
    return is_zero(x);
  else
    return abs(x) < tolerance(static_cast<unsigned>(BigFloat::default_precision()));
}

template <class F>
std::vector<F> coefficients(const SeriesSpec& s, unsigned n) {
  const F zero = FieldTraits<F>::from(Rational(0)), one = FieldTraits<F>::from(Rational(1));
  std::vector<F> out(n, zero);
  switch (s.kind) {
    case SeriesSpec::Kind::Hypergeometric: {
      const F z = lift<F>(s.scale);
      F c = one;
      for (unsigned k = 0; k < n; ++k) {
        out[k] = c;
        const F kk = FieldTraits<F>::from(Rational(k));
        F num = z, den = FieldTraits<F>::from(Rational(k + 1));
        for (const auto& a : s.upper) num = num * (lift<F>(a) + kk);
        for (const auto& b : s.lower) den = den * (lift<F>(b) + kk);
        if (vanishes(den)) throw Error("lower hypergeometric parameter hits a nonpositive integer");
        c = c * num / den;
      }
      return out;
    }
    case SeriesSpec::Kind::Exponential: {
      const F z = lift<F>(s.scale);
      F c = one;
      for (unsigned k = 0; k < n; ++k) {
        out[k] = c;
        c = c * z / FieldTraits<F>::from(Rational(k + 1));
      }
      return out;
    }
    case SeriesSpec::Kind::Product: {
      auto a = coefficients<F>(*s.children[0], n), b = coefficients<F>(*s.children[1], n);
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; i + j < n; ++j) out[i + j] = out[i + j] + a[i] * b[j];
      return out;
    }
    case SeriesSpec::Kind::Apply: {
      const unsigned extra = s.op.max_lower();
      auto inner = coefficients<F>(*s.children[0], n + extra);
      for (const auto& [key, v] : s.op.terms()) {
        auto [i, j] = key;
        const F cv = FieldTraits<F>::from(v);
        for (unsigned k = j; k < inner.size(); ++k) {
          const unsigned target = k - j + i;
          if (target >= n) continue;
          Rational falling = 1;
          for (unsigned t = 0; t < j; ++t) falling *= Rational(k - t);
          out[target] = out[target] + cv * FieldTraits<F>::from(falling) * inner[k];
        }
      }
      return out;
    }
    case SeriesSpec::Kind::EulerFactors: {
      auto inner = coefficients<F>(*s.children[0], n);
      for (unsigned k = 0; k < n; ++k) {
        F f = one;
        for (const auto& e : s.e) {
          const F ev = lift<F>(e);
          if (vanishes(ev)) throw Error("factor parameter e must be nonzero");
          f = f * (FieldTraits<F>::from(Rational(k)) / ev + one);
        }
        out[k] = f * inner[k];
      }
      return out;
    }
    case SeriesSpec::Kind::Scale: {
      auto inner = coefficients<F>(*s.children[0], n);
      const F c = lift<F>(s.scale);
      for (unsigned k = 0; k < n; ++k) out[k] = c * inner[k];
      return out;
    }
  }
  throw Error("unknown series kind");
}

}  // namespace

std::vector<Rational> series_coefficients(const SeriesSpec& s, unsigned n) {
  if (!s.exact()) throw Error("series has floating parameters");
  return coefficients<Rational>(s, n);
}

std::vector<Complex> series_coefficients_float(const SeriesSpec& s, unsigned n) { return coefficients<Complex>(s, n); }

IdentityCheck verify_identity_series(const SeriesSpec& lhs, const SeriesSpec& rhs, unsigned n, unsigned digits) {
  IdentityCheck out;
  if (lhs.exact() && rhs.exact()) {
    auto l = coefficients<Rational>(lhs, n), r = coefficients<Rational>(rhs, n);
    for (unsigned k = 0; k < n; ++k) {
      if (l[k] != r[k]) {
        out.mismatch = k;
        out.lhs = to_string(l[k]);
        out.rhs = to_string(r[k]);
        return out;
      }
    }
    out.equal = true;
    return out;
  }
  out.exact = false;
  PrecisionScope scope(digits + 10);
  const BigFloat tol = tolerance(digits);
  auto l = coefficients<Complex>(lhs, n), r = coefficients<Complex>(rhs, n);
  for (unsigned k = 0; k < n; ++k) {
    BigFloat err = abs(l[k] - r[k]);
    BigFloat rel = err / std::max(BigFloat(1), abs(r[k]));
    out.max_error = std::max(out.max_error, rel);
    if (rel > tol && !out.mismatch) {
      out.mismatch = k;
      out.lhs = to_string(l[k], 30);
      out.rhs = to_string(r[k], 30);
    }
  }
  out.equal = !out.mismatch;
  return out;
}

FactorizationCheck verify_factorization(const QWeyl& gen, const QWeyl& heun, const Rational& qstar) {
  FactorizationCheck out;
  OreDivision d = ore_right_divide(weyl_to_ore(gen), weyl_to_ore(heun.plus_scalar(-qstar)));
  out.ok = d.remainder.is_zero();
  out.remainder = to_string(d.remainder);
  return out;
}

FactorizationCheck verify_factorization(const CWeyl& gen, const QWeyl& heun, const Complex& qstar,
                                        unsigned digits) {
  FactorizationCheck out;
  out.exact = false;
  PrecisionScope scope(digits + 10);
  CWeyl h = heun.map_coeffs<Complex>([](const Rational& v) { return Complex(v); }).plus_scalar(-qstar);
  auto pr = ore_pseudo_remainder<Complex>(weyl_to_ore_poly(gen), weyl_to_ore_poly(h));
  BigFloat denom = ore_norm(pr.scaled_dividend);
  out.norm = denom == 0 ? BigFloat(0) : BigFloat(ore_norm(pr.remainder) / denom);
  out.ok = out.norm < tolerance(digits);
  out.remainder = "norm " + out.norm.str(10, std::ios_base::scientific);
  return out;
}

namespace {

template <class F>
WeylOp<F> target_impl(const HeunParams& p, const std::vector<F>& e) {
  if (p.variant == HeunVariant::HeunHat) throw Error("factorization target needs the X D + gamma ladder");
  const F one = FieldTraits<F>::from(Rational(1));
  std::vector<F> upper{FieldTraits<F>::from(p.alpha)}, lower{FieldTraits<F>::from(p.gamma)};
  if (p.variant == HeunVariant::Heun) upper.push_back(FieldTraits<F>::from(p.beta));
  for (const auto& v : e) {
    upper.push_back(v + one);
    lower.push_back(v);
  }
  F scale = p.variant == HeunVariant::Confluent ? FieldTraits<F>::from(Rational(-p.epsilon)) : one;
  if (is_zero(scale)) throw Error("confluent factorization needs epsilon != 0");
  return generalized_hypergeometric<F>(upper, lower, scale);
}

}  // namespace

QWeyl factorization_target(const HeunParams& p, const std::vector<Rational>& e) { return target_impl(p, e); }
CWeyl factorization_target(const HeunParams& p, const std::vector<Complex>& e, unsigned digits) {
  PrecisionScope scope(digits + 10);
  return target_impl(p, e);
}

}  // namespace dmod

namespace dmod {

unsigned invariant_degree(const HeunParams& p) {
  const Rational& v = p.variant == HeunVariant::Confluent ? p.delta : p.epsilon;
  if (v.get_den() != 1 || sgn(v) > 0 || !v.get_num().fits_slong_p())
    throw Error(std::string(p.variant == HeunVariant::Confluent ? "delta" : "epsilon") +
                " must be a nonpositive integer to fix the matrix degree");
  return static_cast<unsigned>(-v.get_num().get_si());
}

HeunEigenReport heun_eigen(const HeunParams& p, std::optional<unsigned> degree, unsigned digits, unsigned order) {
  p.check();
  HeunEigenReport out;
  out.matrix = remainder_matrix(p, degree ? *degree : invariant_degree(p));
  out.charpoly = characteristic_polynomial(out.matrix);
  const bool has_target = p.variant != HeunVariant::HeunHat;
  const QWeyl heun = heun_operator(p);
  SeriesSpec base = p.variant == HeunVariant::Confluent
                        ? SeriesSpec::hypergeometric({p.alpha}, {p.gamma}, Scalar(Rational(-p.epsilon)))
                        : SeriesSpec::hypergeometric({p.alpha, p.beta}, {p.gamma});
  out.verified = true;
  for (auto& sol : eigen_solve(out.matrix, digits)) {
    HeunEigenCheck check;
    if (has_target && sol.sstar.size() > 1) sol.e_list = extract_e(sol.sstar, p.gamma, digits);
    check.solution = sol;
    if (has_target && !sol.e_list.empty()) {
      const bool exact = sol.qstar.is_exact() &&
                         std::all_of(sol.e_list.begin(), sol.e_list.end(), [](const Scalar& e) { return e.is_exact(); });
      if (exact) {
        std::vector<Rational> e;
        for (const auto& v : sol.e_list) e.push_back(v.exact());
        check.factorization = verify_factorization(factorization_target(p, e), heun, sol.qstar.exact());
      } else {
        std::vector<Complex> e;
        for (const auto& v : sol.e_list) e.push_back(v.approx());
        check.factorization =
            verify_factorization(factorization_target(p, e, digits), heun, sol.qstar.approx(), digits);
      }
      std::vector<Scalar> upper = base.upper, lower = base.lower;
      for (const auto& e : sol.e_list) {
        upper.push_back(e + Scalar(1));
        lower.push_back(e);
      }
      check.identity = verify_identity_series(SeriesSpec::euler_factors(sol.e_list, base),
                                              SeriesSpec::hypergeometric(upper, lower, base.scale), order, digits);
      out.verified = out.verified && check.factorization->ok && check.identity->equal;
    }
    out.eigen.push_back(std::move(check));
  }
  return out;
}

}  // namespace dmod
