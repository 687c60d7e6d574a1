#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "qift/field.hpp"
#include "qift/mpoly.hpp"

namespace qift {

// Coefficient bounds on the closed polydisc ||x|| <= r.
//
// Archimedean: sums of coefficient bounds of the polynomial and its partials.
// Non-archimedean: maxima over the Taylor expansion with divided derivatives,
// p(x + h) = sum_k D^(k)p(x) h^k, whose coefficients are c_m binom(m, k) with
// |binom| <= 1. This keeps the bounds valid when p divides an exponent.

template <ValuedField F>
double sup_bound(const MPoly<F>& p, double radius) {
  const F& fld = p.field();
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) {
    const double t = fld.abs(c) * std::pow(radius, static_cast<double>(total_degree(m)));
    if constexpr (F::archimedean) acc += t;
    else acc = std::max(acc, t);
  }
  return acc;
}

template <ValuedField F>
double lipschitz_bound(const MPoly<F>& p, double radius) {
  if constexpr (F::archimedean) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.arity(); ++i) acc += sup_bound(p.partial(i), radius);
    return acc;
  } else {
    double acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
      const auto d = total_degree(m);
      if (d >= 1) acc = std::max(acc, p.field().abs(c) * std::pow(radius, static_cast<double>(d - 1)));
    }
    return acc;
  }
}

template <ValuedField F>
double second_order_bound(const MPoly<F>& p, double radius) {
  if constexpr (F::archimedean) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.arity(); ++i) {
      const auto di = p.partial(i);
      for (std::size_t j = 0; j < p.arity(); ++j) acc += sup_bound(di.partial(j), radius);
    }
    return 0.5 * acc;
  } else {
    double acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
      const auto d = total_degree(m);
      if (d >= 2) acc = std::max(acc, p.field().abs(c) * std::pow(radius, static_cast<double>(d - 2)));
    }
    return acc;
  }
}

/// Minimum coefficient valuation among terms of total degree >= min_degree
/// (the exact exponent of the non-archimedean bounds at radius 1).
inline std::int64_t min_valuation(const MPoly<PadicField>& p, std::uint32_t min_degree = 0) {
  std::int64_t v = Padic::kInfinity;
  for (const auto& [m, c] : p.terms())
    if (total_degree(m) >= min_degree) v = std::min(v, c.valuation());
  return v;
}

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

/// A posteriori floating-point error bound for evaluating p at x in double arithmetic.
template <ValuedField F>
double eval_error_bound(const MPoly<F>& p, const Vector<F>& x) {
  if constexpr (!F::archimedean || std::same_as<F, RationalField>) {
    return 0.0;
  } else {
    const double k = static_cast<double>(p.total_degree() + p.size() + 2);
    return 4.0 * k * kUnitRoundoff * p.abs_eval(x);
  }
}

template <ValuedField F>
double map_eval_error_bound(const PolyMap<F>& phi, const Vector<F>& x) {
  double e = 0.0;
  for (const auto& c : phi.components()) e = std::max(e, eval_error_bound(c, x));
  return e;
}

}  // namespace qift
