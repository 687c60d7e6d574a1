#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/linalg.hpp"

namespace qift {

using Monomial = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::uint32_t{0});
}

// Graded lexicographic order: total degree first, then lex with x0 > x1 > ...
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Sparse multivariate polynomial with coefficients in F, terms kept in grlex order.
template <ValuedField F>
class MPoly {
 public:
  using Scalar = typename F::Scalar;
  using Terms = std::map<Monomial, Scalar, GrlexLess>;

  MPoly() = default;
  MPoly(F field, std::size_t arity) : field_(std::move(field)), arity_(arity) {}

  static MPoly constant(const F& field, std::size_t arity, const Scalar& c) {
    MPoly p(field, arity);
    p.add_term(Monomial(arity, 0), c);
    return p;
  }

  static MPoly variable(const F& field, std::size_t arity, std::size_t i) {
    if (i >= arity) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
    Monomial m(arity, 0);
    m[i] = 1;
    MPoly p(field, arity);
    p.add_term(m, field.one());
    return p;
  }

  const F& field() const { return field_; }
  std::size_t arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, qift::total_degree(m));
    return d;
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }

  Scalar coefficient(const Monomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  void add_term(const Monomial& m, const Scalar& c) {
    if (m.size() != arity_) throw Error(ErrorCode::InvalidArgument, "monomial arity mismatch");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!field_.is_zero(c)) terms_.emplace(m, c);
      return;
    }
    it->second = it->second + c;
    if (field_.is_zero(it->second)) terms_.erase(it);
  }

  MPoly operator-() const {
    MPoly r(field_, arity_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, field_.zero() - c);
    return r;
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly r = a.adopt(b);
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }

  friend MPoly operator-(const MPoly& a, const MPoly& b) {
    MPoly r = a.adopt(b);
    for (const auto& [m, c] : b.terms_) r.add_term(m, r.field_.zero() - c);
    return r;
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r = a.adopt(b);
    r.terms_.clear();
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(r.arity_);
        for (std::size_t i = 0; i < r.arity_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  MPoly scaled(const Scalar& s) const {
    MPoly r(field_, arity_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }

  MPoly pow(unsigned k) const {
    MPoly r = constant(field_, arity_, field_.one());
    MPoly base = *this;
    while (k) {
      if (k & 1u) r = r * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return r;
  }

  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  // Exact structural equality (same monomials, coefficients equal in F).
  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (a.arity_ != b.arity_) return false;
    return (a - b).is_zero();
  }

  MPoly partial(std::size_t i) const {
    if (i >= arity_) throw Error(ErrorCode::InvalidArgument, "partial: variable index out of range");
    MPoly r(field_, arity_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      --d[i];
      r.add_term(d, c * field_.from_int(static_cast<long>(m[i])));
    }
    return r;
  }

  Scalar eval(const Vector<F>& x) const {
    if (x.size() != arity_) throw Error(ErrorCode::InvalidArgument, "eval: point dimension mismatch");
    const auto powers = power_table(x);
    Scalar acc = field_.zero();
    for (const auto& [m, c] : terms_) acc = acc + c * monomial_value(powers, m);
    return acc;
  }

  // Sum of |c_m| |x^m|: the scale against which floating evaluation error is measured.
  double abs_eval(const Vector<F>& x) const {
    const auto powers = power_table(x);
    double acc = 0.0;
    for (const auto& [m, c] : terms_) acc += field_.abs(c) * field_.abs(monomial_value(powers, m));
    return acc;
  }

  // Substitutes images[i] for x_i; all images share one arity.
  MPoly substitute(const std::vector<MPoly>& images) const {
    if (images.size() != arity_) throw Error(ErrorCode::InvalidArgument, "substitute: wrong number of images");
    const std::size_t out_arity = images.empty() ? 0 : images[0].arity_;
    MPoly r(field_, out_arity);
    for (const auto& [m, c] : terms_) {
      MPoly t = constant(field_, out_arity, c);
      for (std::size_t i = 0; i < arity_; ++i)
        if (m[i]) t = t * images[i].pow(m[i]);
      r += t;
    }
    return r;
  }

  // Coefficients of var^k, k = 0..degree_in(var), each free of var.
  std::vector<MPoly> coefficients_in(std::size_t var) const {
    std::vector<MPoly> out(degree_in(var) + 1, MPoly(field_, arity_));
    for (const auto& [m, c] : terms_) {
      Monomial r = m;
      r[var] = 0;
      out[m[var]].add_term(r, c);
    }
    return out;
  }

  MPoly homogeneous_part(std::uint32_t degree) const {
    MPoly r(field_, arity_);
    for (const auto& [m, c] : terms_)
      if (qift::total_degree(m) == degree) r.terms_.emplace(m, c);
    return r;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const auto d = qift::total_degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return qift::total_degree(t.first) == d; });
  }

  // Canonical text: terms in descending grlex order, variables named x0, x1, ...
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string coef = field_.format(c, 8);
      bool negative = !coef.empty() && coef[0] == '-';
      if (negative) coef = coef.substr(1);
      if (first) out += negative ? "-" : "";
      else out += negative ? " - " : " + ";
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < arity_; ++i) {
        if (!m[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i);
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      if (mono.empty()) out += coef;
      else if (coef == "1") out += mono;
      else out += needs_parens(coef) ? "(" + coef + ")*" + mono : coef + "*" + mono;
    }
    return out;
  }

 private:
  static bool needs_parens(const std::string& coef) {
    return coef.find_first_of("+- ") != std::string::npos;
  }

  MPoly adopt(const MPoly& other) const {
    if (arity_ != other.arity_ && !(terms_.empty() && arity_ == 0))
      throw Error(ErrorCode::InvalidArgument, "polynomial arity mismatch");
    MPoly r = *this;
    if (r.arity_ == 0) {
      r.arity_ = other.arity_;
      r.field_ = other.field_;
    }
    return r;
  }

  std::vector<std::vector<Scalar>> power_table(const Vector<F>& x) const {
    std::vector<std::uint32_t> maxdeg(arity_, 0);
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < arity_; ++i) maxdeg[i] = std::max(maxdeg[i], m[i]);
    std::vector<std::vector<Scalar>> powers(arity_);
    for (std::size_t i = 0; i < arity_; ++i) {
      powers[i].push_back(field_.one());
      for (std::uint32_t k = 1; k <= maxdeg[i]; ++k) powers[i].push_back(powers[i].back() * x[i]);
    }
    return powers;
  }

  Scalar monomial_value(const std::vector<std::vector<Scalar>>& powers, const Monomial& m) const {
    Scalar v = field_.one();
    bool any = false;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (!m[i]) continue;
      v = any ? v * powers[i][m[i]] : powers[i][m[i]];
      any = true;
    }
    return v;
  }

  F field_{};
  std::size_t arity_ = 0;
  Terms terms_;
};

/// Maps an exact rational polynomial into the field F.
template <ValuedField F>
MPoly<F> lift(const F& field, const MPoly<RationalField>& p) {
  MPoly<F> r(field, p.arity());
  for (const auto& [m, c] : p.terms()) r.add_term(m, field.from_rational(c.get_num(), c.get_den()));
  return r;
}

template <ValuedField F>
bool is_zero_poly(const MPoly<F>& p) {
  return p.is_zero();
}

template <ValuedField F>
MPoly<F> poly_det(const Grid<MPoly<F>>& m, const F& field, std::size_t arity) {
  return det_generic(m, MPoly<F>(field, arity), MPoly<F>::constant(field, arity, field.one()),
                     [](const MPoly<F>& p) { return p.is_zero(); });
}

template <ValuedField F>
Grid<MPoly<F>> poly_adjugate(const Grid<MPoly<F>>& m, const F& field, std::size_t arity) {
  return adjugate_generic(m, MPoly<F>(field, arity), MPoly<F>::constant(field, arity, field.one()),
                          [](const MPoly<F>& p) { return p.is_zero(); });
}

/// Square polynomial map phi = (phi_1, ..., phi_N) with its Jacobian matrix,
/// Jacobian determinant and adjugate precomputed symbolically.
template <ValuedField F>
class PolyMap {
 public:
  using Scalar = typename F::Scalar;

  PolyMap() = default;

  PolyMap(F field, std::vector<MPoly<F>> components)
      : field_(std::move(field)), comps_(std::move(components)) {
    const std::size_t n = comps_.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty polynomial map");
    for (auto& c : comps_) {
      if (c.arity() == 0 && c.is_zero()) c = MPoly<F>(field_, n);
      if (c.arity() != n) throw Error(ErrorCode::InvalidArgument, "polynomial map must be square");
    }
    jac_.assign(n, std::vector<MPoly<F>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) jac_[i][j] = comps_[i].partial(j);
    det_ = poly_det(jac_, field_, n);
    adj_ = poly_adjugate(jac_, field_, n);
  }

  // Symbolic pieces are computed exactly over Q and then mapped into F.
  static PolyMap from_rational(const F& field, const PolyMap<RationalField>& exact) {
    PolyMap r;
    r.field_ = field;
    const std::size_t n = exact.dim();
    for (const auto& c : exact.components()) r.comps_.push_back(lift(field, c));
    r.jac_.assign(n, std::vector<MPoly<F>>(n));
    r.adj_.assign(n, std::vector<MPoly<F>>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        r.jac_[i][j] = lift(field, exact.jacobian()[i][j]);
        r.adj_[i][j] = lift(field, exact.adjugate()[i][j]);
      }
    }
    r.det_ = lift(field, exact.jacobian_det());
    return r;
  }

  const F& field() const { return field_; }
  std::size_t dim() const { return comps_.size(); }
  const std::vector<MPoly<F>>& components() const { return comps_; }
  const MPoly<F>& operator[](std::size_t i) const { return comps_[i]; }
  const Grid<MPoly<F>>& jacobian() const { return jac_; }
  const MPoly<F>& jacobian_det() const { return det_; }
  const Grid<MPoly<F>>& adjugate() const { return adj_; }

  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& c : comps_) d = std::max(d, c.total_degree());
    return d;
  }

  Vector<F> eval(const Vector<F>& x) const {
    Vector<F> r;
    r.reserve(dim());
    for (const auto& c : comps_) r.push_back(c.eval(x));
    return r;
  }

  Matrix<F> jacobian_at(const Vector<F>& x) const {
    Grid<Scalar> g(dim(), std::vector<Scalar>(dim()));
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) g[i][j] = jac_[i][j].eval(x);
    return Matrix<F>(field_, std::move(g));
  }

  Scalar jacobian_det_at(const Vector<F>& x) const { return det_.eval(x); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < dim(); ++i) out += (i ? " ; " : "") + comps_[i].to_string();
    return out;
  }

 private:
  F field_{};
  std::vector<MPoly<F>> comps_;
  Grid<MPoly<F>> jac_;
  MPoly<F> det_;
  Grid<MPoly<F>> adj_;
};

template <ValuedField F>
MPoly<F> identity_component(const F& field, std::size_t n, std::size_t i) {
  return MPoly<F>::variable(field, n, i);
}

/// lambda_E = log 1/|J(x)|; +inf exactly when J(x) vanishes at working precision.
template <ValuedField F>
LogDistance lambda_E(const PolyMap<F>& phi, const Vector<F>& x) {
  return log_inv_abs(phi.field(), phi.jacobian_det_at(x));
}

template <ValuedField F>
LogDistance lambda_E(const F& field, const Vector<F>& x, const MPoly<F>& J) {
  if (J.arity() != x.size()) throw Error(ErrorCode::InvalidArgument, "lambda_E: arity mismatch");
  return log_inv_abs(field, J.eval(x));
}

}  // namespace qift
