#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "qift/error.hpp"
#include "qift/field.hpp"

namespace qift {

template <class T>
using Grid = std::vector<std::vector<T>>;

// Division-free determinant over any commutative ring: Laplace expansion along
// the last row, memoized on the set of columns still in play. O(n 2^n) ring ops.
template <class T, class IsZero>
T det_generic(const Grid<T>& m, const T& zero, const T& one, IsZero is_zero) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "determinant dimension too large");
  for (const auto& row : m)
    if (row.size() != n) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::uint32_t full = (1u << n) - 1;
  std::vector<T> memo(static_cast<std::size_t>(full) + 1, zero);
  memo[0] = one;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int k = std::popcount(mask);
    const auto& row = m[static_cast<std::size_t>(k - 1)];
    T acc = zero;
    int greater = 0;
    for (int j = static_cast<int>(n) - 1; j >= 0; --j) {
      const std::uint32_t bit = 1u << j;
      if (!(mask & bit)) continue;
      if (!is_zero(row[static_cast<std::size_t>(j)])) {
        T term = row[static_cast<std::size_t>(j)] * memo[mask ^ bit];
        if (greater % 2) acc = acc - term;
        else acc = acc + term;
      }
      ++greater;
    }
    memo[mask] = std::move(acc);
  }
  return memo[full];
}

template <class T>
Grid<T> minor_of(const Grid<T>& m, std::size_t row, std::size_t col) {
  Grid<T> r;
  r.reserve(m.size() - 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<T> line;
    line.reserve(m.size() - 1);
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != col) line.push_back(m[i][j]);
    r.push_back(std::move(line));
  }
  return r;
}

// adj(M)[j][i] = (-1)^(i+j) det(M without row i and column j); M adj(M) = det(M) I.
template <class T, class IsZero>
Grid<T> adjugate_generic(const Grid<T>& m, const T& zero, const T& one, IsZero is_zero) {
  const std::size_t n = m.size();
  Grid<T> adj(n, std::vector<T>(n, zero));
  if (n == 1) {
    adj[0][0] = one;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T d = det_generic(minor_of(m, i, j), zero, one, is_zero);
      adj[j][i] = (i + j) % 2 ? zero - d : d;
    }
  }
  return adj;
}

/// Square matrix over a valued field.
template <ValuedField F>
class Matrix {
 public:
  using Scalar = typename F::Scalar;

  Matrix(F field, Grid<Scalar> entries) : field_(std::move(field)), a_(std::move(entries)) {
    for (const auto& row : a_)
      if (row.size() != a_.size()) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
  }

  static Matrix identity(const F& field, std::size_t n) {
    Grid<Scalar> g(n, std::vector<Scalar>(n, field.zero()));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = field.one();
    return Matrix(field, std::move(g));
  }

  static Matrix diagonal(const F& field, const Vector<F>& d) {
    Grid<Scalar> g(d.size(), std::vector<Scalar>(d.size(), field.zero()));
    for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
    return Matrix(field, std::move(g));
  }

  std::size_t size() const { return a_.size(); }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i][j]; }
  const Grid<Scalar>& entries() const { return a_; }
  const F& field() const { return field_; }

  Scalar det() const {
    return det_generic(a_, field_.zero(), field_.one(), [&](const Scalar& x) { return field_.is_zero(x); });
  }

  Matrix adjugate() const {
    return Matrix(field_, adjugate_generic(a_, field_.zero(), field_.one(),
                                           [&](const Scalar& x) { return field_.is_zero(x); }));
  }

  Matrix operator*(const Matrix& o) const {
    const std::size_t n = size();
    Grid<Scalar> r(n, std::vector<Scalar>(n, field_.zero()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) r[i][j] = r[i][j] + a_[i][k] * o.a_[k][j];
    return Matrix(field_, std::move(r));
  }

  Vector<F> operator*(const Vector<F>& v) const {
    if (v.size() != size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector dimension mismatch");
    Vector<F> r(size(), field_.zero());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t k = 0; k < size(); ++k) r[i] = r[i] + a_[i][k] * v[k];
    return r;
  }

  // adj(M) v / det(M)
  Vector<F> apply_inverse(const Vector<F>& v) const {
    const Scalar d = det();
    if (field_.is_zero(d)) throw Error(ErrorCode::SingularMatrix, "determinant vanishes");
    Vector<F> r = adjugate() * v;
    for (auto& x : r) x = x / d;
    return r;
  }

 private:
  F field_;
  Grid<Scalar> a_;
};

}  // namespace qift
