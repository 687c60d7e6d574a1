#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include "qift/certify.hpp"
#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/mpoly.hpp"
#include "qift/newton.hpp"
#include "qift/unipoly.hpp"

namespace qift {

/// (x0, ..., x_{n-1}, t) -> (x0, ..., x_{n-1}, t^n + x_{n-1} t^{n-1} + ... + x1 t + x0)
inline PolyMap<RationalField> companion_map(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "companion map needs n >= 1");
  const RationalField Q;
  const std::size_t N = n + 1;
  std::vector<MPoly<RationalField>> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(MPoly<RationalField>::variable(Q, N, i));
  const auto t = MPoly<RationalField>::variable(Q, N, n);
  MPoly<RationalField> last = t.pow(static_cast<unsigned>(n));
  for (std::size_t i = 0; i < n; ++i) last += MPoly<RationalField>::variable(Q, N, i) * t.pow(static_cast<unsigned>(i));
  comps.push_back(last);
  return PolyMap<RationalField>(Q, std::move(comps));
}

template <ValuedField F>
struct RootWithMultiplicity {
  typename F::Scalar root;
  int multiplicity = 1;
};

inline constexpr double kAberthTolerance = 1e-12;

namespace detail {

using cplx = std::complex<double>;

inline std::vector<cplx> aberth(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  if (c.empty()) throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial");
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return {};
  const cplx lead = c.back();
  for (auto& x : c) x /= lead;
  double gauss = 0.0;
  for (const auto& x : c) gauss = std::max(gauss, std::abs(x));
  const double radius = 1.0 + gauss;

  auto eval = [&](cplx z, cplx& dp) {
    cplx p = c[n];
    dp = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c[i];
    }
    return p;
  };

  std::vector<cplx> z(n);
  const double pi = std::acos(-1.0);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * pi * k / n + 0.4);

  std::vector<bool> done(n, false);
  for (int it = 0; it < 1000; ++it) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx dp;
      const cplx p = eval(z[k], dp);
      if (p == cplx(0.0)) {
        done[k] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      cplx w = ratio / (1.0 - ratio * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
      z[k] -= w;
      if (std::abs(w) <= kAberthTolerance * (1.0 + std::abs(z[k]))) done[k] = true;
      else all_done = false;
    }
    if (all_done) break;
  }
  // Newton polish of simple roots; clusters are left to the caller.
  for (int k = 0; k < n; ++k) {
    for (int it = 0; it < 3; ++it) {
      cplx dp;
      const cplx p = eval(z[k], dp);
      if (dp == cplx(0.0)) break;
      const cplx w = p / dp;
      if (std::abs(w) > 1e-6 * (1.0 + std::abs(z[k]))) break;
      z[k] -= w;
    }
  }
  return z;
}

// Newton inclusion radii n |p(z)| / |p'(z)|: each disk contains a root of p.
inline std::vector<double> inclusion_radii(const std::vector<cplx>& c, const std::vector<cplx>& z) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> r;
  for (const auto& x : z) {
    cplx p = c[n], dp = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + c[i];
    }
    r.push_back(dp == cplx(0.0) ? 0.0 : n * std::abs(p) / std::abs(dp));
  }
  return r;
}

// Groups approximations of a multiple root; returns (mean, count). Two approximations join
// when they lie within rel of each other or their inclusion disks overlap.
inline std::vector<std::pair<cplx, int>> cluster(std::vector<cplx> z, double rel, const std::vector<double>& radii = {}) {
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) <= rel * (1.0 + std::max(std::abs(z[i]), std::abs(z[j]))) ||
          (!radii.empty() && std::abs(z[i] - z[j]) <= radii[i] + radii[j]))
        parent[find(i)] = find(j);
  std::vector<std::pair<cplx, int>> out;
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
    seen.push_back(r);
    cplx sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == r) {
        sum += z[j];
        ++count;
      }
    out.emplace_back(sum / static_cast<double>(count), count);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return out;
}

inline constexpr double kClusterTolerance = 1e-5;

template <ValuedField F>
std::vector<cplx> to_complex_coeffs(const UniPoly<F>& g) {
  std::vector<cplx> c;
  for (const auto& x : g.coeffs()) c.emplace_back(x);
  return c;
}

// --- p-adic oracle -------------------------------------------------------------

struct PadicOracle {
  const UniPoly<PadicField>& g;  // primitive: minimum coefficient valuation 0
  const PadicField& fld;
  std::vector<Padic>& found;
  std::int64_t depth_limit;
  std::int64_t depth_bound;

  // Coefficients of g(a + p^k y) divided by their content, as residues mod p where needed.
  UniPoly<PadicField> shifted(const Padic& a, std::int64_t k) const {
    std::vector<Padic> c;
    const Padic pk = Padic::make(fld.p, fld.digits, k, 1, fld.digits);
    Padic scale = fld.one();
    for (int j = 0; j <= g.degree(); ++j) {
      c.push_back(g.hasse(j).eval(a) * scale);
      scale = scale * pk;
    }
    std::int64_t v = Padic::kInfinity;
    for (const auto& x : c) v = std::min(v, x.valuation());
    if (v >= Padic::kInfinity)
      throw Error(ErrorCode::OracleDepthExceeded, "shifted polynomial vanishes at working precision");
    const Padic inv = Padic::make(fld.p, fld.digits, -v, 1, fld.digits);
    for (auto& x : c) x = x * inv;
    return UniPoly<PadicField>(fld, std::move(c));
  }

  static std::uint64_t residue_mod_p(const Padic& x, std::uint32_t p) {
    if (x.is_zero() || x.valuation() > 0) return 0;
    return mpz_class(x.residue(1)).get_ui() % p;
  }

  void search(const Padic& a, std::int64_t k) {
    if (k > depth_bound) throw Error(ErrorCode::OracleDepthExceeded, "residue recursion too deep");
    if (k >= depth_limit) {
      found.push_back(a.truncated(k));
      return;
    }
    const auto h = shifted(a, k);
    const auto dh = h.derivative();
    const std::uint32_t p = fld.p;
    std::vector<std::uint64_t> hc, dc;
    for (const auto& x : h.coeffs()) hc.push_back(residue_mod_p(x, p));
    for (const auto& x : dh.coeffs()) dc.push_back(residue_mod_p(x, p));
    auto eval_mod = [p](const std::vector<std::uint64_t>& c, std::uint64_t y) {
      std::uint64_t acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * y + *it) % p;
      return acc;
    };
    for (std::uint64_t y0 = 0; y0 < p; ++y0) {
      if (eval_mod(hc, y0) != 0) continue;
      const Padic next = a + Padic::make(p, fld.digits, k, mpz_class(static_cast<unsigned long>(y0)), fld.digits);
      if (eval_mod(dc, y0) != 0) {
        found.push_back(hensel(h, Padic::from_int(p, fld.digits, static_cast<long>(y0)), a, k));
      } else {
        search(next, k + 1);
      }
    }
  }

  // Lifts the simple residue root y0 of h and maps it back to x = a + p^k y.
  Padic hensel(const UniPoly<PadicField>& h, Padic y, const Padic& a, std::int64_t k) const {
    const auto dh = h.derivative();
    for (int it = 0; it < 4 * 64 && !h.eval(y).is_zero(); ++it) y = y - h.eval(y) / dh.eval(y);
    const Padic pk = Padic::make(fld.p, fld.digits, k, 1, fld.digits);
    Padic x = a + pk * y;
    // Polish on g itself; precision is tracked by the arithmetic.
    const auto dg = g.derivative();
    for (int it = 0; it < 8; ++it) {
      const Padic gx = g.eval(x);
      if (gx.is_zero()) break;
      const Padic d = dg.eval(x);
      if (d.is_zero() || gx.valuation() <= 2 * d.valuation()) break;
      x = x - gx / d;
    }
    return x;
  }
};

// Certified absolute precision of an approximate simple root x of g (Hensel bound).
inline Padic certify_padic_root(const UniPoly<PadicField>& g, const Padic& x) {
  const Padic gx = g.eval(x);
  const Padic d = g.derivative().eval(x);
  if (d.is_zero()) return x;
  const std::int64_t gv = gx.is_zero() ? gx.absprec() : gx.valuation();
  if (gv <= 2 * d.valuation()) return x;
  return x.truncated(std::min(x.absprec(), gv - d.valuation()));
}

inline std::vector<Padic> padic_integral_roots(const UniPoly<PadicField>& g_in) {
  const PadicField& fld = g_in.field();
  const std::int64_t gv = gauss_valuation(g_in);
  const auto g = g_in.scaled(Padic::make(fld.p, fld.digits, -gv, 1, fld.digits));
  std::vector<Padic> found;
  PadicOracle oracle{g, fld, found, fld.digits, 4 * static_cast<std::int64_t>(fld.digits)};
  oracle.search(fld.zero(), 0);
  std::vector<Padic> out;
  for (const auto& x : found) out.push_back(certify_padic_root(g, x));
  return out;
}

}  // namespace detail

/// All roots in the ground field with multiplicities.
template <ValuedField F>
std::vector<RootWithMultiplicity<F>> all_roots(const UniPoly<F>& g) {
  if (g.is_zero()) throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial");
  std::vector<RootWithMultiplicity<F>> out;
  if constexpr (std::same_as<F, PadicField>) {
    const PadicField& fld = g.field();
    std::vector<Padic> roots = detail::padic_integral_roots(g);
    // Roots of negative valuation are inverses of roots of the reversal with positive valuation.
    const auto rev = g.reversed();
    if (rev.degree() > 0) {
      for (const auto& y : detail::padic_integral_roots(rev)) {
        if (y.is_zero() || y.valuation() <= 0) continue;
        roots.push_back(detail::certify_padic_root(g, fld.one() / y));
      }
    }
    for (const auto& r : roots) out.push_back({r, std::max(1, root_multiplicity(g, r))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.root.valuation() != b.root.valuation()) return a.root.valuation() < b.root.valuation();
      return a.root.unit() < b.root.unit();
    });
  } else {
    const auto c = detail::to_complex_coeffs(g);
    const auto z = detail::aberth(c);
    for (const auto& [root, mult] : detail::cluster(z, detail::kClusterTolerance, detail::inclusion_radii(c, z))) {
      if constexpr (std::same_as<F, RealField>) {
        if (std::abs(root.imag()) > 1e-8 * (1.0 + std::abs(root))) continue;
        out.push_back({root.real(), mult});
      } else {
        out.push_back({root, mult});
      }
    }
  }
  return out;
}

enum class ShiftMode { VersionI_exponent_n_minus_1, VersionII_exponent_1 };

inline const char* to_string(ShiftMode m) {
  return m == ShiftMode::VersionI_exponent_n_minus_1 ? "VersionI_exponent_n_minus_1" : "VersionII_exponent_1";
}

template <ValuedField F>
struct RootShiftResult {
  typename F::Scalar beta{};
  double bound_lhs = 0;
  double bound_rhs = 0;
  ShiftMode mode = ShiftMode::VersionII_exponent_1;
  std::optional<double> krasner_margin;
  bool rational = false;  // Krasner margin > 1
  double constant = 0;    // C with bound_rhs = C |f - g|
  double D = 0;
  double theta = 0;
  double distance = 0;    // |f - g|
  int iterations = 0;
  bool satisfied = false;
};

/// |g'(beta)| / |alpha - beta|, +inf when alpha = beta.
inline double krasner_margin(const UniPoly<PadicField>& g, const Padic& alpha, const Padic& beta) {
  const Padic d = g.derivative().eval(beta);
  if (d.is_zero()) throw Error(ErrorCode::DerivativeVanishes, "g'(beta) = 0");
  const Padic diff = alpha - beta;
  if (diff.is_zero()) return kInf;
  return std::pow(static_cast<double>(g.field().p), static_cast<double>(diff.valuation() - d.valuation()));
}

namespace detail {

template <ValuedField F>
bool poly_equal(const UniPoly<F>& f, const UniPoly<F>& g) {
  return (f - g).is_zero();
}

}  // namespace detail

/// Transports the root alpha of f to the nearby root beta of g by Newton iteration on g.
template <ValuedField F>
RootShiftResult<F> shift_root(const UniPoly<F>& f, const UniPoly<F>& g, const typename F::Scalar& alpha,
                              ShiftMode mode = ShiftMode::VersionII_exponent_1, std::optional<double> D_decl = {}) {
  if (!f.is_monic() || !g.is_monic()) throw Error(ErrorCode::InvalidArgument, "f and g must be monic");
  if (f.degree() != g.degree()) throw Error(ErrorCode::InvalidArgument, "f and g must have the same degree");
  if (!vanishes_at(f, alpha)) throw Error(ErrorCode::InvalidArgument, "alpha is not a root of f");
  const F& fld = f.field();
  const int n = f.degree();
  const double D = D_decl ? *D_decl : std::max(gauss_norm(f), gauss_norm(g));
  if (gauss_norm(f) > D || gauss_norm(g) > D) throw Error(ErrorCode::InvalidArgument, "Gauss norm exceeds D");

  RootShiftResult<F> res;
  res.mode = mode;
  res.D = D;
  if (detail::poly_equal(f, g)) {
    res.beta = alpha;
    res.satisfied = true;
    if constexpr (std::same_as<F, PadicField>) res.krasner_margin = kInf, res.rational = true;
    return res;
  }
  const auto fp = f.derivative();
  const auto dfa = fp.eval(alpha);
  if (vanishes_at(fp, alpha)) throw Error(ErrorCode::MultipleRoot, "f'(alpha) = 0 and f != g");

  const auto diff = g - f;
  res.distance = gauss_norm(diff);
  const double a = fld.abs(alpha);
  const double fpa = fld.abs(dfa);
  double S0 = 0.0, S1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pw = std::pow(a, i);
    const double dpw = i ? fld.abs(fld.from_int(i)) * std::pow(a, i - 1) : 0.0;
    if constexpr (F::archimedean) S0 += pw, S1 += dpw;
    else S0 = std::max(S0, pw), S1 = std::max(S1, dpw);
  }
  res.theta = S1 * res.distance / fpa;
  if (res.theta >= 1.0) throw Error(ErrorCode::HypothesisViolated, "|f - g| too large against |f'(alpha)|");

  const PolyMap<F> map(fld, {g.to_mpoly()});
  const Vector<F> P{alpha};
  const Vector<F> target{fld.zero()};
  ConstantBundle bundle;
  if constexpr (F::archimedean) bundle = certify_arch(map, Box::checked(1.0 + D, 2.0 * (1.0 + D)), 0.5);
  else bundle = certify_nonarch(map, Box{std::max(1.0, D), std::max(1.0, D)});
  if (!basin_test(map, P, target, bundle))
    throw Error(ErrorCode::HypothesisViolated, "alpha is outside the certified basin of g");
  const auto outcome = solve(map, P, target, bundle);
  if (!outcome.solved()) throw Error(ErrorCode::HypothesisViolated, std::string("Newton on g ended with ") + to_string(outcome.status));
  res.beta = (*outcome.Q)[0];
  res.iterations = outcome.iterations;

  double C = bundle.C2_lipschitz * S0;
  if constexpr (F::archimedean) C /= (1.0 - res.theta);
  const double dist = fld.abs(alpha - res.beta);
  if (mode == ShiftMode::VersionII_exponent_1) {
    res.constant = C;
    res.bound_lhs = dist * fpa;
  } else {
    res.constant = C * std::pow(fpa, n - 2);
    res.bound_lhs = dist * std::pow(fpa, n - 1);
  }
  res.bound_rhs = res.constant * res.distance;
  if constexpr (F::archimedean) {
    res.satisfied = res.bound_lhs <= res.bound_rhs * (1.0 + 1e-9) + outcome.bound_tolerance * S0 / (1.0 - res.theta);
  } else {
    res.satisfied = res.bound_lhs <= res.bound_rhs;
    res.krasner_margin = krasner_margin(g, alpha, res.beta);
    res.rational = *res.krasner_margin > 1.0;
  }
  return res;
}

/// Fiber of a univariate map over q with multiplicities.
template <ValuedField F>
std::vector<RootWithMultiplicity<F>> fiber_univariate(const UniPoly<F>& g, const typename F::Scalar& q) {
  return all_roots(g - UniPoly<F>(g.field(), {q}));
}

/// Complex fiber of a two-dimensional map by eliminating x1 with a resultant
/// (points with J != 0 only carry multiplicity 1).
inline std::vector<Vector<ComplexField>> fiber_resultant_2d(const PolyMap<ComplexField>& phi,
                                                            const Vector<ComplexField>& q) {
  if (phi.dim() != 2) throw Error(ErrorCode::InvalidArgument, "resultant fiber needs a 2-dimensional map");
  const ComplexField C;
  const auto f1 = phi[0] - MPoly<ComplexField>::constant(C, 2, q[0]);
  const auto f2 = phi[1] - MPoly<ComplexField>::constant(C, 2, q[1]);
  const auto R = resultant(f1, f2, 1);
  const auto Rx = UniPoly<ComplexField>::from_mpoly(R, 0);
  std::vector<Vector<ComplexField>> pts;
  if (Rx.degree() <= 0) return pts;
  for (const auto& [x0, m] : all_roots(Rx)) {
    (void)m;
    // Candidates for x1 from whichever equation stays nonconstant at x0.
    for (const auto* fk : {&f2, &f1}) {
      std::vector<std::complex<double>> c;
      for (const auto& coef : fk->coefficients_in(1)) c.push_back(coef.eval({x0, 0.0}));
      const UniPoly<ComplexField> u(C, c);
      if (u.degree() <= 0) continue;
      for (const auto& [x1, m1] : all_roots(u)) {
        (void)m1;
        const Vector<ComplexField> pt{x0, x1};
        const auto v = phi.eval(pt);
        const double scale = 1.0 + sup_norm(C, q);
        if (std::abs(v[0] - q[0]) <= 1e-8 * scale && std::abs(v[1] - q[1]) <= 1e-8 * scale) {
          bool dup = false;
          for (const auto& e : pts) dup = dup || (std::abs(e[0] - x0) + std::abs(e[1] - x1) <= 1e-8 * scale);
          if (!dup) pts.push_back(pt);
        }
      }
      break;
    }
  }
  return pts;
}

/// Member of `candidates` nearest to P in the sup norm.
template <ValuedField F>
std::optional<Vector<F>> nearest(const F& fld, const std::vector<Vector<F>>& candidates, const Vector<F>& P) {
  std::optional<Vector<F>> best;
  double bd = kInf;
  for (const auto& c : candidates) {
    const double d = sup_norm(fld, vec_sub<F>(c, P));
    if (d < bd) bd = d, best = c;
  }
  return best;
}

}  // namespace qift
