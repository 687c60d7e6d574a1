#pragma once

// Hand-rolled random generators shared by the property tests and the acceptance binary.

#include <cstdint>
#include <random>
#include <vector>

#include "qift/qift.hpp"

namespace qift::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Monomial in n variables of total degree <= max_degree.
inline Monomial monomial(Rng& r, std::size_t n, int max_degree) {
  Monomial m(n, 0);
  const long d = r.integer(0, max_degree);
  for (long k = 0; k < d; ++k) m[r.index(n)] += 1;
  return m;
}

/// Sparse polynomial with `terms` monomials and coefficients drawn by `coef`.
template <class Coef>
MPoly<RationalField> sparse_poly(Rng& r, std::size_t n, int max_degree, int terms, Coef&& coef) {
  MPoly<RationalField> p(RationalField{}, n);
  for (int t = 0; t < terms; ++t) p.add_term(monomial(r, n, max_degree), coef());
  return p;
}

/// Integer coefficients in [-bound, bound] \ {0}.
inline MPoly<RationalField> integer_poly(Rng& r, std::size_t n, int max_degree, int terms, long bound = 9) {
  return sparse_poly(r, n, max_degree, terms, [&] {
    long c = 0;
    while (c == 0) c = r.integer(-bound, bound);
    return mpq_class(c);
  });
}

/// Map with integer coefficients and nonzero Jacobian determinant.
inline PolyMap<RationalField> integer_map(Rng& r, std::size_t n, int max_degree, int max_terms, long bound = 9) {
  for (;;) {
    std::vector<MPoly<RationalField>> comps;
    for (std::size_t i = 0; i < n; ++i)
      comps.push_back(integer_poly(r, n, max_degree, static_cast<int>(r.integer(1, max_terms)), bound));
    PolyMap<RationalField> phi(RationalField{}, std::move(comps));
    if (!phi.jacobian_det().is_zero()) return phi;
  }
}

/// Map with coefficients in {-2, -1.5, ..., 2} \ {0}, 1 to max_terms terms per component.
inline PolyMap<RationalField> small_real_map(Rng& r, std::size_t n, int max_degree, int max_terms) {
  for (;;) {
    std::vector<MPoly<RationalField>> comps;
    for (std::size_t i = 0; i < n; ++i) {
      comps.push_back(sparse_poly(r, n, max_degree, static_cast<int>(r.integer(1, max_terms)), [&] {
        long h = 0;
        while (h == 0) h = r.integer(-4, 4);
        return mpq_class(h, 2);
      }));
    }
    PolyMap<RationalField> phi(RationalField{}, std::move(comps));
    if (!phi.jacobian_det().is_zero()) return phi;
  }
}

/// p-adic integer with valuation in [vmin, vmax] and a random unit of `unit_digits` digits.
inline Padic padic(Rng& r, const PadicField& f, long vmin, long vmax, int unit_digits = 12) {
  mpz_class u = 0;
  while (u % f.p == 0) {
    u = 0;
    for (int i = 0; i < unit_digits; ++i) u = u * f.p + static_cast<unsigned long>(r.integer(0, f.p - 1));
  }
  if (r.coin()) u = -u;
  return Padic::make(f.p, f.digits, r.integer(vmin, vmax), u, f.digits);
}

/// Random p-adic integer (valuation 0 with probability about 1 - 1/p).
inline Padic padic_integer(Rng& r, const PadicField& f) {
  mpz_class u = 0;
  for (int i = 0; i < 20; ++i) u = u * f.p + static_cast<unsigned long>(r.integer(0, f.p - 1));
  if (u == 0) return f.zero();
  return f.from_rational(u, 1);
}

inline Vector<PadicField> padic_point(Rng& r, const PadicField& f, std::size_t n) {
  Vector<PadicField> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(padic_integer(r, f));
  return v;
}

inline Vector<RealField> real_point(Rng& r, std::size_t n, double radius) {
  Vector<RealField> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(r.real(-radius, radius));
  return v;
}

/// Monic polynomial with integer coefficients in [-bound, bound].
inline UniPoly<RationalField> monic(Rng& r, int degree, long bound = 20) {
  std::vector<mpq_class> c;
  for (int i = 0; i < degree; ++i) c.emplace_back(r.integer(-bound, bound));
  c.emplace_back(1);
  return UniPoly<RationalField>(RationalField{}, std::move(c));
}

inline const std::vector<std::uint32_t>& primes() {
  static const std::vector<std::uint32_t> p{2, 3, 5, 7};
  return p;
}

}  // namespace qift::gen
