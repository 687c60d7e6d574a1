#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/linalg.hpp"
#include "qift/mpoly.hpp"

namespace qift {

inline constexpr double kArchVanishing = 1e-9;

/// Univariate polynomial, coefficients stored from the constant term upward.
template <ValuedField F>
class UniPoly {
 public:
  using Scalar = typename F::Scalar;

  UniPoly() = default;
  UniPoly(F field, std::vector<Scalar> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

  static UniPoly from_mpoly(const MPoly<F>& p, std::size_t var = 0) {
    std::vector<Scalar> c(p.degree_in(var) + 1, p.field().zero());
    for (const auto& [m, coef] : p.terms()) {
      for (std::size_t i = 0; i < m.size(); ++i)
        if (i != var && m[i]) throw Error(ErrorCode::InvalidArgument, "polynomial is not univariate");
      c[m[var]] = c[m[var]] + coef;
    }
    return UniPoly(p.field(), std::move(c));
  }

  // Monic polynomial t^n + c_{n-1} t^(n-1) + ... + c_0 from its lower coefficients.
  static UniPoly monic(const F& field, std::vector<Scalar> lower) {
    lower.push_back(field.one());
    return UniPoly(field, std::move(lower));
  }

  const F& field() const { return field_; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Scalar coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : field_.zero(); }
  Scalar leading() const { return c_.empty() ? field_.zero() : c_.back(); }

  // Leading coefficient exactly 1.
  bool is_monic() const {
    if (c_.empty()) return false;
    if constexpr (std::same_as<F, PadicField>) {
      const Padic& l = c_.back();
      return l.valuation() == 0 && l.unit() == 1;
    } else {
      return c_.back() == field_.one();
    }
  }

  Scalar eval(const Scalar& x) const {
    Scalar acc = field_.zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double abs_eval(const Scalar& x) const {
    const double ax = field_.abs(x);
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + field_.abs(*it);
    return acc;
  }

  UniPoly derivative() const { return hasse(1); }

  // k-th divided derivative: sum binom(i,k) c_i t^(i-k).
  UniPoly hasse(int k) const {
    std::vector<Scalar> d;
    for (int i = k; i <= degree(); ++i) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(k));
      d.push_back(c_[i] * field_.from_rational(b, 1));
    }
    return UniPoly(field_, std::move(d));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    const F& fld = a.c_.empty() ? b.field_ : a.field_;
    std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()), fld.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return UniPoly(fld, std::move(r));
  }

  UniPoly operator-() const {
    std::vector<Scalar> r;
    for (const auto& x : c_) r.push_back(field_.zero() - x);
    return UniPoly(field_, std::move(r));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return UniPoly(a.field_, {});
    std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1, a.field_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return UniPoly(a.field_, std::move(r));
  }

  UniPoly scaled(const Scalar& s) const {
    std::vector<Scalar> r;
    for (const auto& x : c_) r.push_back(x * s);
    return UniPoly(field_, std::move(r));
  }

  // t^n f(1/t)
  UniPoly reversed() const {
    std::vector<Scalar> r(c_.rbegin(), c_.rend());
    return UniPoly(field_, std::move(r));
  }

  MPoly<F> to_mpoly() const {
    MPoly<F> p(field_, 1);
    for (std::size_t i = 0; i < c_.size(); ++i) p.add_term(Monomial{static_cast<std::uint32_t>(i)}, c_[i]);
    return p;
  }

  std::string to_string() const {
    std::string s = to_mpoly().to_string();
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 'x' && i + 1 < s.size() && s[i + 1] == '0') {
        out += 't';
        ++i;
      } else {
        out += s[i];
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && field_.is_zero(c_.back())) c_.pop_back();
  }

  F field_{};
  std::vector<Scalar> c_;
};

/// Maximum absolute value of the coefficients.
template <ValuedField F>
double gauss_norm(const UniPoly<F>& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs()) m = std::max(m, f.field().abs(c));
  return m;
}

/// Minimum coefficient valuation; the exact form of the Gauss norm over Q_p.
inline std::int64_t gauss_valuation(const UniPoly<PadicField>& f) {
  std::int64_t v = Padic::kInfinity;
  for (const auto& c : f.coeffs()) v = std::min(v, c.valuation());
  return v;
}

template <ValuedField F>
bool vanishes_at(const UniPoly<F>& f, const typename F::Scalar& x) {
  const auto v = f.eval(x);
  if constexpr (F::archimedean && !std::same_as<F, RationalField>) {
    return f.field().abs(v) <= kArchVanishing * std::max(1.0, f.abs_eval(x));
  } else {
    return f.field().is_zero(v);
  }
}

/// Largest k with f and its first k-1 derivatives vanishing at alpha.
template <ValuedField F>
int root_multiplicity(const UniPoly<F>& f, const typename F::Scalar& alpha) {
  if (f.is_zero()) throw Error(ErrorCode::InvalidArgument, "multiplicity of a root of the zero polynomial");
  int k = 0;
  while (k <= f.degree() && vanishes_at(f.hasse(k), alpha)) ++k;
  return k;
}

/// Sylvester resultant over a commutative ring, coefficients listed from the constant term.
/// Res(t - a, t - b) = a - b.
template <class T, class IsZero>
T resultant_generic(std::vector<T> f, std::vector<T> g, const T& zero, const T& one, IsZero is_zero) {
  while (!f.empty() && is_zero(f.back())) f.pop_back();
  while (!g.empty() && is_zero(g.back())) g.pop_back();
  if (f.empty() || g.empty()) throw Error(ErrorCode::InvalidArgument, "resultant of a zero polynomial");
  const std::size_t m = f.size() - 1, n = g.size() - 1;
  const std::size_t s = m + n;
  if (s == 0) return one;
  Grid<T> syl(s, std::vector<T>(s, zero));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) syl[r][r + k] = f[m - k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) syl[n + r][r + k] = g[n - k];
  return det_generic(syl, zero, one, is_zero);
}

template <ValuedField F>
typename F::Scalar resultant(const UniPoly<F>& f, const UniPoly<F>& g) {
  const F& fld = f.field();
  return resultant_generic(f.coeffs(), g.coeffs(), fld.zero(), fld.one(),
                           [&](const typename F::Scalar& x) { return fld.is_zero(x); });
}

/// Eliminates variable `var` from f and g; the result does not involve `var`.
template <ValuedField F>
MPoly<F> resultant(const MPoly<F>& f, const MPoly<F>& g, std::size_t var) {
  const F& fld = f.field();
  const std::size_t n = f.arity();
  return resultant_generic(f.coefficients_in(var), g.coefficients_in(var), MPoly<F>(fld, n),
                           MPoly<F>::constant(fld, n, fld.one()), [](const MPoly<F>& p) { return p.is_zero(); });
}

}  // namespace qift
