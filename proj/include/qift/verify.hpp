#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qift/bounds.hpp"
#include "qift/certify.hpp"
#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/mpoly.hpp"
#include "qift/newton.hpp"
#include "qift/parse.hpp"
#include "qift/roots.hpp"
#include "qift/unipoly.hpp"

namespace qift {

inline constexpr double kArchSlackTolerance = 1e-9;

/// lhs <= rhs with slack = rhs - lhs. Over Q_p both sides are integral multiples of
/// log p and the verdict is taken on the integers.
struct InequalityReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  bool holds = false;
  bool exact = false;
  std::string context;
};

struct SuiteResult {
  std::string suite;
  std::vector<InequalityReport> cases;
  bool all_pass = true;
  std::string first_failure;
};

template <ValuedField F>
struct FiberPoint {
  Vector<F> point;
  int multiplicity = 1;
};

namespace detail {

inline constexpr std::int64_t kInfUnits = Padic::kInfinity;

inline double units_to_log(std::int64_t u, double logp) {
  return u >= kInfUnits ? kInf : static_cast<double>(u) * logp;
}

inline InequalityReport exact_report(std::string name, std::int64_t lhs, std::int64_t rhs, double logp,
                                     std::string context) {
  InequalityReport r;
  r.name = std::move(name);
  r.exact = true;
  r.context = std::move(context);
  r.lhs = units_to_log(lhs, logp);
  r.rhs = units_to_log(rhs, logp);
  if (rhs >= kInfUnits) {
    r.holds = true;
    r.slack = lhs >= kInfUnits ? 0.0 : kInf;
  } else {
    r.holds = lhs <= rhs;
    r.slack = lhs >= kInfUnits ? -kInf : static_cast<double>(rhs - lhs) * logp;
  }
  return r;
}

inline InequalityReport approx_report(std::string name, double lhs, double rhs, std::string context) {
  InequalityReport r;
  r.name = std::move(name);
  r.context = std::move(context);
  r.lhs = lhs;
  r.rhs = rhs;
  if (std::isinf(rhs) && rhs > 0) {
    r.slack = std::isinf(lhs) && lhs > 0 ? 0.0 : kInf;
    r.holds = true;
  } else {
    r.slack = rhs - lhs;
    r.holds = r.slack >= -kArchSlackTolerance;
  }
  return r;
}

inline std::int64_t units_of(const LogDistance& d) { return d.valuation.value_or(kInfUnits); }

inline std::int64_t add_units(std::int64_t a, std::int64_t b) {
  return a >= kInfUnits || b >= kInfUnits ? kInfUnits : a + b;
}

// Integer k with p^k = c, when c is an exact power of p.
inline std::optional<std::int64_t> exact_log_p(double c, std::uint32_t p) {
  if (!(c > 0.0)) return std::nullopt;
  const double k = std::log(c) / std::log(static_cast<double>(p));
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

template <ValuedField F>
std::string vec_text(const F& fld, const Vector<F>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fld.format(v[i]);
  return s + ")";
}

template <ValuedField F>
bool maps_to(const PolyMap<F>& phi, const Vector<F>& x, const Vector<F>& q) {
  const F& fld = phi.field();
  const auto r = vec_sub<F>(phi.eval(x), q);
  if constexpr (F::archimedean) return sup_norm(fld, r) <= 1e-8 * (1.0 + sup_norm(fld, q));
  else return vec_is_zero(fld, r);
}

}  // namespace detail

/// delta(phi(P), q) <= sum_Q e(Q) delta(P, Q) + C over the supplied fiber.
template <ValuedField F>
InequalityReport check_distribution(const PolyMap<F>& phi, const Vector<F>& P, const Vector<F>& q,
                                    const std::vector<FiberPoint<F>>& fiber, double C = 0.0) {
  const F& fld = phi.field();
  for (const auto& Q : fiber)
    if (!detail::maps_to(phi, Q.point, q))
      throw Error(ErrorCode::FiberMismatch, "fiber point " + detail::vec_text(fld, Q.point) + " does not map to q");
  const std::string ctx = "P=" + detail::vec_text(fld, P) + " q=" + detail::vec_text(fld, q);
  const LogDistance lhs = delta(fld, phi.eval(P), q);
  if constexpr (std::same_as<F, PadicField>) {
    const auto cu = C == 0.0 ? std::optional<std::int64_t>(0) : detail::exact_log_p(std::exp(C), fld.p);
    if (cu) {
      std::int64_t rhs = *cu;
      for (const auto& Q : fiber)
        rhs = detail::add_units(rhs, Q.multiplicity * detail::units_of(delta(fld, P, Q.point)));
      // With P in the fiber both sides are infinite; equality by convention.
      return detail::exact_report("distribution", detail::units_of(lhs), rhs, fld.log_p(), ctx);
    }
  }
  double rhs = C;
  for (const auto& Q : fiber) rhs += Q.multiplicity * delta(fld, P, Q.point).value;
  return detail::approx_report("distribution", lhs.value, rhs, ctx);
}

/// log(C_key C_tayf) on the smallest registered box holding both points; the additive
/// constant of the separation inequality.
template <ValuedField F>
double separation_constant(const PolyMap<F>& phi, double radius) {
  const F& fld = phi.field();
  if constexpr (F::archimedean) {
    const auto b = coefficient_bounds(phi, radius);
    return std::log(b.C_key * b.C_tayf);
  } else {
    double r = 1.0;
    while (r < radius) r *= fld.p;
    const auto b = certify_nonarch(phi, Box{r, r});
    return std::log(b.C_key * b.C_tayf);
  }
}

/// delta(Q, Q') <= lambda_E(Q) + C_sep for distinct points of one fiber.
template <ValuedField F>
InequalityReport check_separation(const PolyMap<F>& phi, const Vector<F>& Q, const Vector<F>& Qp,
                                  std::optional<double> C_sep_override = {}) {
  const F& fld = phi.field();
  const auto d = vec_sub<F>(Q, Qp);
  if (vec_is_zero(fld, d)) throw Error(ErrorCode::NotSameFiber, "Q = Q'");
  if (!detail::maps_to(phi, Qp, phi.eval(Q))) throw Error(ErrorCode::NotSameFiber, "phi(Q) != phi(Q')");
  const double radius = std::max({1.0, sup_norm(fld, Q), sup_norm(fld, Qp)});
  const double C = C_sep_override ? *C_sep_override : separation_constant(phi, radius);
  const std::string ctx = "Q=" + detail::vec_text(fld, Q) + " Q'=" + detail::vec_text(fld, Qp) +
                          " C_sep=" + detail::format_double(C);
  const LogDistance lhs = delta(fld, Q, Qp);
  const LogDistance lam = lambda_E(phi, Q);
  if constexpr (std::same_as<F, PadicField>) {
    const auto cu = detail::exact_log_p(std::exp(C), fld.p);
    if (cu && !C_sep_override) {
      auto r = detail::exact_report("separation", detail::units_of(lhs), detail::add_units(detail::units_of(lam), *cu),
                                    fld.log_p(), ctx);
      return r;
    }
  }
  return detail::approx_report("separation", lhs.value, lam.value + C, ctx);
}

/// |f(a) - f(b) - grad f(b) (a - b)| <= second_order_bound(f, b2) ||a - b||^2.
template <ValuedField F>
InequalityReport check_taylor(const MPoly<F>& f, const Vector<F>& a, const Vector<F>& b, double b2) {
  const F& fld = f.field();
  if (sup_norm(fld, a) > b2 || sup_norm(fld, b) > b2) throw Error(ErrorCode::InvalidArgument, "a, b outside the box");
  const auto h = vec_sub<F>(a, b);
  auto rem = f.eval(a) - f.eval(b);
  for (std::size_t i = 0; i < h.size(); ++i) rem = rem - f.partial(i).eval(b) * h[i];
  const double C = second_order_bound(f, b2);
  const std::string ctx = "f=" + f.to_string() + " a=" + detail::vec_text(fld, a) + " b=" + detail::vec_text(fld, b);
  if constexpr (std::same_as<F, PadicField>) {
    const auto cu = detail::exact_log_p(C, fld.p);
    // In valuations: v(rem) >= 2 v(h) - log_p C; reported as magnitudes.
    const std::int64_t vr = rem.is_zero() ? detail::kInfUnits : rem.valuation();
    std::int64_t vh = detail::kInfUnits;
    for (const auto& x : h) vh = std::min(vh, x.valuation());
    if (C == 0.0 || cu) {
      InequalityReport r;
      r.name = "taylor";
      r.exact = true;
      r.context = ctx;
      r.lhs = fld.abs(rem);
      r.rhs = C * sup_norm(fld, h) * sup_norm(fld, h);
      r.slack = r.rhs - r.lhs;
      if (vr >= detail::kInfUnits) r.holds = true;
      else if (C == 0.0 || vh >= detail::kInfUnits) r.holds = false;
      else r.holds = vr >= 2 * vh - *cu;
      return r;
    }
  }
  const double hn = sup_norm(fld, h);
  InequalityReport r = detail::approx_report("taylor", fld.abs(rem), C * hn * hn, ctx);
  // Rounding in the remainder scales with the magnitudes of the evaluated terms.
  if constexpr (F::archimedean) {
    double scale = f.abs_eval(a) + f.abs_eval(b);
    for (std::size_t i = 0; i < h.size(); ++i) scale += f.partial(i).abs_eval(b) * fld.abs(h[i]);
    r.holds = r.slack >= -(kArchSlackTolerance + 64.0 * kUnitRoundoff * scale);
  }
  return r;
}

struct SquaringProductResult {
  double delta_V = 0;
  double delta_W = 0;
  double ratio = 0;
  double margin = 0;  // 2 delta_W - delta_V
  bool equality_violated = false;
  InequalityReport distribution;
};

/// (x, z) -> (x^2, z) over Q_p at P = (a, b), q = (0, 0) with a = p^m, b = p^ceil(kappa m).
inline SquaringProductResult run_example_squaring_product(std::uint32_t p, int m, double kappa) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (!(kappa >= 1.0 && kappa <= 2.0)) throw Error(ErrorCode::InvalidArgument, "kappa must lie in [1, 2]");
  const PadicField fld(p);
  const auto phi = parse_map(fld, "x0^2 ; x1");
  const auto k = static_cast<std::int64_t>(std::ceil(kappa * m - 1e-12));
  const Vector<PadicField> P{Padic::make(p, fld.digits, m, 1, fld.digits), Padic::make(p, fld.digits, k, 1, fld.digits)};
  const Vector<PadicField> q{fld.zero(), fld.zero()};
  const Vector<PadicField> Q{fld.zero(), fld.zero()};

  SquaringProductResult res;
  const LogDistance dV = delta(fld, phi.eval(P), q);
  const LogDistance dW = delta(fld, P, Q);
  res.delta_V = dV.value;
  res.delta_W = dW.value;
  res.ratio = static_cast<double>(*dV.valuation) / static_cast<double>(*dW.valuation);
  res.margin = static_cast<double>(2 * *dW.valuation - *dV.valuation) * fld.log_p();
  res.equality_violated = 2 * *dW.valuation > *dV.valuation;
  res.distribution = check_distribution(phi, P, q, {{Q, 2}});
  return res;
}

struct PlaceDependenceResult {
  int sign_at_v = 0;
  int sign_at_w = 0;
  double margin_v = 0;
  double margin_w = 0;
  std::string Q;
  bool solver_agrees = false;
};

namespace detail {

// Sign s in {+1, -1} maximizing delta(1, sQ) over Q_p, the margin, and whether Newton from 1
// toward Q^2 lands on sQ.
inline std::tuple<int, double, bool> select_sign(std::uint32_t p, const mpq_class& Q) {
  const PadicField fld(p);
  const Padic one = fld.one();
  const Padic Qp = fld.from_rational(Q.get_num(), Q.get_den());
  const LogDistance plus = delta(fld, Vector<PadicField>{one}, Vector<PadicField>{Qp});
  const LogDistance minus = delta(fld, Vector<PadicField>{one}, Vector<PadicField>{-Qp});
  const std::int64_t up = units_of(plus), um = units_of(minus);
  const int sign = um > up ? -1 : 1;
  const double margin = static_cast<double>(std::abs(um - up)) * fld.log_p();
  const auto phi = parse_map(fld, "x0^2");
  const auto bundle = certify_nonarch(phi, Box{1.0, 1.0});
  const auto out = solve(phi, {one}, {Qp * Qp}, bundle);
  bool agrees = false;
  if (out.solved()) {
    const Padic target = sign > 0 ? Qp : -Qp;
    agrees = ((*out.Q)[0] - target).is_zero();
  }
  return {sign, margin, agrees};
}

inline int abs_pattern(const mpq_class& x, std::uint32_t p) {
  // -1: |x|_p < 1, 0: |x|_p = 1, 1: |x|_p > 1
  const Padic v = PadicField(p).from_rational(x.get_num(), x.get_den());
  if (v.is_zero() || v.valuation() > 0) return -1;
  return v.valuation() == 0 ? 0 : 1;
}

}  // namespace detail

/// Q = (alpha^n - beta^n)/(alpha^n + beta^n), q = Q^2, P = 1: the root of t^2 - q nearest P is
/// Q at one place and -Q at the other.
inline PlaceDependenceResult run_example_place_dependence(std::uint32_t p_v, std::uint32_t p_w, const mpq_class& alpha,
                                                          const mpq_class& beta, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const bool pattern = detail::abs_pattern(alpha, p_v) < 0 && detail::abs_pattern(alpha, p_w) == 0 &&
                       detail::abs_pattern(beta, p_v) == 0 && detail::abs_pattern(beta, p_w) < 0;
  const bool swapped = detail::abs_pattern(beta, p_v) < 0 && detail::abs_pattern(beta, p_w) == 0 &&
                       detail::abs_pattern(alpha, p_v) == 0 && detail::abs_pattern(alpha, p_w) < 0;
  if (!pattern && !swapped)
    throw Error(ErrorCode::SetupViolated, "need one of alpha, beta small at v and a unit at w, the other the reverse");
  mpq_class an = 1, bn = 1;
  for (int i = 0; i < n; ++i) an *= alpha, bn *= beta;
  if (an + bn == 0) throw Error(ErrorCode::SetupViolated, "alpha^n + beta^n = 0");
  mpq_class Q = (an - bn) / (an + bn);
  Q.canonicalize();
  PlaceDependenceResult res;
  res.Q = Q.get_str();
  const auto [sv, mv, av] = detail::select_sign(p_v, Q);
  const auto [sw, mw, aw] = detail::select_sign(p_w, Q);
  res.sign_at_v = sv;
  res.sign_at_w = sw;
  res.margin_v = mv;
  res.margin_w = mw;
  res.solver_agrees = av && aw;
  return res;
}

struct SymbolicChecks {
  bool ex33_degree2_not_in_product_ideal = false;
  bool rem510_in_I2 = false;
  bool rem510_not_in_I1 = false;
  bool jacobian_matches_ramification = false;
  std::string quadric_linear_part;

  bool all() const { return ex33_degree2_not_in_product_ideal && rem510_in_I2 && rem510_not_in_I1 && jacobian_matches_ramification; }
};

/// Elementary ideal (non)membership certificates.
inline SymbolicChecks check_symbolic_counterexamples() {
  using P = MPoly<RationalField>;
  const RationalField Q;
  SymbolicChecks out;

  {
    // P^1 x P^1 with coordinates ([x:y], [z:w]); two copies in variables 0..3 and 4..7.
    const std::size_t n = 8;
    auto v = [&](std::size_t i) { return P::variable(Q, n, i); };
    const P x1 = v(0), y1 = v(1), z1 = v(2), w1 = v(3), x2 = v(4), y2 = v(5), z2 = v(6), w2 = v(7);
    const P minus = x1 * y2 - x2 * y1;  // diagonal
    const P plus = x1 * y2 + x2 * y1;   // graph of [x:y] -> [-x:y]
    const P h = z1 * w2 - z2 * w1;
    const std::vector<P> left{minus * plus, minus * h, h * plus, h * h};
    const std::vector<P> right{x1 * x1 * y2 * y2 - x2 * x2 * y1 * y1, h};
    // Every left generator is homogeneous of degree 4, so the ideal has no nonzero element of degree 2.
    bool graded = h.is_homogeneous() && h.total_degree() == 2 && !h.is_zero();
    for (const auto& g : left) graded = graded && g.is_homogeneous() && g.total_degree() == 4;
    // The inclusion left in right: the first product is the first right generator, the rest are multiples of h.
    const bool inclusion = left[0] == right[0];
    const bool h_in_right = right[1] == h;
    out.ex33_degree2_not_in_product_ideal = graded && inclusion && h_in_right;
  }

  {
    const auto phi = parse_map("x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
    out.jacobian_matches_ramification = phi.jacobian_det() == parse_poly("2*x0^2 - 2*x1^2", 2);
    // Variables x, y, z, w.
    const std::size_t n = 4;
    auto v = [&](std::size_t i) { return P::variable(Q, n, i); };
    const P x = v(0), y = v(1), z = v(2), w = v(3);
    const P target = x * y - z * w;
    const P gen = (x * y + P::constant(Q, n, 1)) - (z * w + P::constant(Q, n, 1));
    out.rem510_in_I2 = target == gen;

    // z = x + s, w = y + t in variables x, y, s, t; I1 becomes (x^2 - y^2)(s, t) + (s, t)^2.
    const P s = v(2), t = v(3);
    const P sub = target.substitute({x, y, x + s, y + t});
    P lin_s(Q, n), lin_t(Q, n), constant(Q, n);
    for (const auto& [mono, c] : sub.terms()) {
      const unsigned st = mono[2] + mono[3];
      std::vector<std::uint32_t> xy{mono[0], mono[1], 0, 0};
      if (st == 0) constant.add_term(xy, c);
      else if (st == 1 && mono[2] == 1) lin_s.add_term(xy, c);
      else if (st == 1) lin_t.add_term(xy, c);
    }
    out.quadric_linear_part = (lin_s * s + lin_t * t).to_string();
    // Membership forces a zero constant part and both linear coefficients divisible by
    // x^2 - y^2, hence zero or of degree >= 2.
    auto divisible_candidate = [](const P& c) { return c.is_zero() || c.total_degree() >= 2; };
    out.rem510_not_in_I1 = !(constant.is_zero() && divisible_candidate(lin_s) && divisible_candidate(lin_t));
  }
  return out;
}

struct VerifyOptions {
  std::optional<double> C_sep_override;  // test hook: replaces the separation constant
  int distribution_instances = 500;
  int separation_instances = 200;
  int taylor_instances = 1000;
};

namespace detail {

inline void finalize(SuiteResult& s) {
  std::stable_sort(s.cases.begin(), s.cases.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  s.all_pass = true;
  s.first_failure.clear();
  for (const auto& c : s.cases) {
    if (!c.holds) {
      s.all_pass = false;
      s.first_failure = c.name + ": " + c.context;
      break;
    }
  }
}

inline std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

inline std::string index_name(const std::string& base, int i) {
  std::ostringstream os;
  os << base << '#';
  os.width(4);
  os.fill('0');
  os << i;
  return os.str();
}

// Integral p-adic number of valuation in [vmin, vmax] with a random unit part.
inline Padic random_padic(std::mt19937_64& rng, const PadicField& f, int vmin, int vmax) {
  std::uniform_int_distribution<int> vd(vmin, vmax);
  std::uniform_int_distribution<long> ud(1, 1000000);
  long u = ud(rng);
  while (u % static_cast<long>(f.p) == 0) u = ud(rng);
  if (rng() & 1) u = -u;
  return Padic::make(f.p, f.digits, vd(rng), mpz_class(u), f.digits);
}

inline const std::vector<std::uint32_t>& suite_primes() {
  static const std::vector<std::uint32_t> primes{2, 3, 5, 7};
  return primes;
}

}  // namespace detail

/// Distribution inequality on t^2 and (x, z) -> (x^2, z) over Q_p with integral data.
inline SuiteResult suite_distribution(std::uint64_t seed, int instances) {
  SuiteResult s{"distribution", {}, true, {}};
  for (int i = 0; i < instances; ++i) {
    auto rng = detail::instance_rng(seed, 1, static_cast<std::uint64_t>(i));
    const PadicField fld(detail::suite_primes()[static_cast<std::size_t>(i) % 4]);
    InequalityReport r;
    if (i % 2 == 0) {
      const auto phi = parse_map(fld, "x0^2");
      const Padic x = detail::random_padic(rng, fld, 0, 4);
      const Padic sq = detail::random_padic(rng, fld, 0, 4);
      const Vector<PadicField> q{sq * sq};
      std::vector<FiberPoint<PadicField>> fiber{{{sq}, 1}, {{-sq}, 1}};
      r = check_distribution(phi, {x}, q, fiber);
    } else {
      const auto phi = parse_map(fld, "x0^2 ; x1");
      const Padic x = detail::random_padic(rng, fld, 0, 4), z = detail::random_padic(rng, fld, 0, 6);
      const Padic sq = detail::random_padic(rng, fld, 0, 4), c = detail::random_padic(rng, fld, 0, 6);
      const Vector<PadicField> q{sq * sq, c};
      std::vector<FiberPoint<PadicField>> fiber{{{sq, c}, 1}, {{-sq, c}, 1}};
      r = check_distribution(phi, {x, z}, q, fiber);
    }
    r.name = detail::index_name("distribution", i);
    r.context = fld.name() + " " + r.context;
    s.cases.push_back(std::move(r));
  }
  detail::finalize(s);
  return s;
}

/// Dimension one: t^2 over Q_p (p odd) away from the zero fiber gives equality.
inline SuiteResult suite_distribution_equality(std::uint64_t seed, int instances) {
  SuiteResult s{"distribution-equality", {}, true, {}};
  static const std::uint32_t primes[] = {3, 5, 7, 11};
  for (int i = 0; i < instances; ++i) {
    auto rng = detail::instance_rng(seed, 2, static_cast<std::uint64_t>(i));
    const PadicField fld(primes[i % 4]);
    const auto phi = parse_map(fld, "x0^2");
    const Padic x = detail::random_padic(rng, fld, 0, 4);
    const Padic sq = detail::random_padic(rng, fld, 0, 0);
    auto r = check_distribution(phi, {x}, {sq * sq}, {{{sq}, 1}, {{-sq}, 1}});
    r.name = detail::index_name("equality", i);
    r.context = fld.name() + " " + r.context;
    // Equality: slack must be exactly 0.
    r.holds = r.holds && r.slack == 0.0;
    s.cases.push_back(std::move(r));
  }
  detail::finalize(s);
  return s;
}

inline SuiteResult suite_separation(std::uint64_t seed, int instances, std::optional<double> C_sep_override) {
  SuiteResult s{"separation", {}, true, {}};
  for (int i = 0; i < instances; ++i) {
    auto rng = detail::instance_rng(seed, 3, static_cast<std::uint64_t>(i));
    InequalityReport r;
    switch (i % 4) {
      case 0: {
        const PadicField fld(detail::suite_primes()[static_cast<std::size_t>(i / 4) % 4]);
        const auto phi = parse_map(fld, "x0^2");
        const Padic x = detail::random_padic(rng, fld, 0, 5);
        r = check_separation(phi, {x}, {-x}, C_sep_override);
        r.context = fld.name() + " " + r.context;
        break;
      }
      case 1: {
        const PadicField fld(detail::suite_primes()[static_cast<std::size_t>(i / 4) % 4]);
        const auto phi = parse_map(fld, "x0^2 ; x1");
        const Padic x = detail::random_padic(rng, fld, 0, 5), z = detail::random_padic(rng, fld, 0, 5);
        r = check_separation(phi, {x, z}, {-x, z}, C_sep_override);
        r.context = fld.name() + " " + r.context;
        break;
      }
      case 2: {
        const RealField R;
        const auto phi = parse_map(R, "x0^2");
        std::uniform_real_distribution<double> e(-8.0, 0.0);
        const double x = std::pow(10.0, e(rng)) * ((rng() & 1) ? 1.0 : -1.0);
        r = check_separation(phi, {x}, {-x}, C_sep_override);
        r.context = "real " + r.context;
        break;
      }
      default: {
        const ComplexField C;
        const auto phi = parse_map(C, "x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const Vector<ComplexField> Q{{u(rng), u(rng)}, {u(rng), u(rng)}};
        const auto q = phi.eval(Q);
        const auto pts = fiber_resultant_2d(phi, q);
        // Nearest other fiber point.
        std::optional<Vector<ComplexField>> other;
        double best = kInf;
        for (const auto& pt : pts) {
          const double d = sup_norm(C, vec_sub<ComplexField>(pt, Q));
          if (d > 1e-6 && d < best) best = d, other = pt;
        }
        if (!other) continue;
        r = check_separation(phi, Q, *other, C_sep_override);
        r.context = "complex " + r.context;
        break;
      }
    }
    r.name = detail::index_name("separation", i);
    s.cases.push_back(std::move(r));
  }
  detail::finalize(s);
  return s;
}

namespace detail {

// Random polynomial in n variables of degree <= 3 with small integer coefficients.
inline MPoly<RationalField> random_poly(std::mt19937_64& rng, std::size_t n, int max_terms = 4) {
  const RationalField Q;
  std::uniform_int_distribution<int> terms(1, max_terms), coef(-4, 4), ex(0, 3);
  MPoly<RationalField> f(Q, n);
  const int k = terms(rng);
  for (int j = 0; j < k; ++j) {
    std::vector<std::uint32_t> m(n, 0);
    int budget = ex(rng);
    for (int b = 0; b < budget; ++b) m[rng() % n] += 1;
    int c = coef(rng);
    if (c == 0) c = 1;
    f.add_term(m, mpq_class(c));
  }
  return f;
}

}  // namespace detail

/// Second-order Taylor remainder against the certified constant on real, complex and Q_p data.
inline SuiteResult suite_taylor(std::uint64_t seed, int instances_per_field) {
  SuiteResult s{"taylor", {}, true, {}};
  const RealField R;
  const ComplexField C;
  for (int i = 0; i < instances_per_field; ++i) {
    for (int fk = 0; fk < 3; ++fk) {
      auto rng = detail::instance_rng(seed, 10 + static_cast<std::uint64_t>(fk), static_cast<std::uint64_t>(i));
      const std::size_t n = 1 + rng() % 2;
      const auto f = detail::random_poly(rng, n);
      InequalityReport r;
      if (fk == 0) {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        Vector<RealField> a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = u(rng), b[j] = u(rng);
        r = check_taylor(lift(R, f), a, b, 2.0);
        r.context = "real " + r.context;
      } else if (fk == 1) {
        std::uniform_real_distribution<double> u(-1.4, 1.4);
        Vector<ComplexField> a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = {u(rng), u(rng)}, b[j] = {u(rng), u(rng)};
        r = check_taylor(lift(C, f), a, b, 2.0);
        r.context = "complex " + r.context;
      } else {
        const PadicField fld(detail::suite_primes()[static_cast<std::size_t>(i) % 4]);
        Vector<PadicField> a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) {
          b[j] = detail::random_padic(rng, fld, 0, 3);
          a[j] = b[j] + detail::random_padic(rng, fld, 0, 4);
        }
        r = check_taylor(lift(fld, f), a, b, 1.0);
        r.context = fld.name() + " " + r.context;
      }
      r.name = detail::index_name(fk == 0 ? "taylor-real" : fk == 1 ? "taylor-complex" : "taylor-padic", i);
      s.cases.push_back(std::move(r));
    }
  }
  detail::finalize(s);
  return s;
}

inline SuiteResult suite_squaring_product() {
  SuiteResult s{"squaring-product", {}, true, {}};
  for (int m = 2; m <= 12; ++m) {
    for (double kappa : {1.0, 1.25, 1.5, 2.0}) {
      const auto r = run_example_squaring_product(3, m, kappa);
      std::ostringstream ctx;
      ctx << "p=3 m=" << m << " kappa=" << kappa << " ratio=" << detail::format_double(r.ratio);
      std::ostringstream nm;
      nm << "m=" << (m < 10 ? "0" : "") << m << " kappa=" << kappa;
      s.cases.push_back(detail::approx_report("ratio " + nm.str(), std::abs(r.ratio - kappa), 2.0 / m, ctx.str()));
      const double need = (2.0 - kappa) * m * std::log(3.0) - std::log(3.0);
      auto margin = detail::approx_report("margin " + nm.str(), need, r.margin, ctx.str());
      if (kappa < 2.0) margin.holds = margin.holds && r.equality_violated;
      s.cases.push_back(margin);
      auto dist = r.distribution;
      dist.name = "distribution " + nm.str();
      s.cases.push_back(dist);
    }
  }
  detail::finalize(s);
  return s;
}

inline SuiteResult suite_place_dependence() {
  SuiteResult s{"place-dependence", {}, true, {}};
  for (int n = 1; n <= 6; ++n) {
    const auto r = run_example_place_dependence(3, 5, 3, 5, n);
    std::ostringstream ctx;
    ctx << "n=" << n << " Q=" << r.Q << " sign_v=" << r.sign_at_v << " sign_w=" << r.sign_at_w;
    auto rv = detail::approx_report("n=" + std::to_string(n) + " margin_v", (n - 1) * std::log(3.0), r.margin_v, ctx.str());
    auto rw = detail::approx_report("n=" + std::to_string(n) + " margin_w", (n - 1) * std::log(5.0), r.margin_w, ctx.str());
    const bool differ = r.sign_at_v != r.sign_at_w && r.solver_agrees;
    rv.holds = rv.holds && differ;
    rw.holds = rw.holds && differ;
    s.cases.push_back(rv);
    s.cases.push_back(rw);
  }
  detail::finalize(s);
  return s;
}

inline SuiteResult suite_symbolic() {
  SuiteResult s{"symbolic", {}, true, {}};
  const auto c = check_symbolic_counterexamples();
  auto flag = [&](const std::string& name, bool ok, const std::string& ctx) {
    InequalityReport r;
    r.name = name;
    r.exact = true;
    r.holds = ok;
    r.lhs = ok ? 0.0 : 1.0;
    r.rhs = 0.0;
    r.slack = r.rhs - r.lhs;
    r.context = ctx;
    s.cases.push_back(r);
  };
  flag("ex33_degree2_not_in_product_ideal", c.ex33_degree2_not_in_product_ideal, "z1*w2 - z2*w1 against degree-4 generators");
  flag("rem510_in_I2", c.rem510_in_I2, "xy - zw = (xy + 1) - (zw + 1)");
  flag("rem510_not_in_I1", c.rem510_not_in_I1, "linear part " + c.quadric_linear_part);
  flag("jacobian_matches_ramification", c.jacobian_matches_ramification, "J = 2*x0^2 - 2*x1^2");
  detail::finalize(s);
  return s;
}

/// Every suite, run concurrently; results sorted by suite name.
inline std::vector<SuiteResult> run_all(std::uint64_t seed, const VerifyOptions& opts = {}) {
  std::vector<std::future<SuiteResult>> jobs;
  jobs.push_back(std::async(std::launch::async, [=] { return suite_distribution(seed, opts.distribution_instances); }));
  jobs.push_back(std::async(std::launch::async, [=] { return suite_distribution_equality(seed, opts.distribution_instances); }));
  jobs.push_back(std::async(std::launch::async, [=] { return suite_separation(seed, opts.separation_instances, opts.C_sep_override); }));
  jobs.push_back(std::async(std::launch::async, [=] { return suite_taylor(seed, opts.taylor_instances); }));
  jobs.push_back(std::async(std::launch::async, [] { return suite_squaring_product(); }));
  jobs.push_back(std::async(std::launch::async, [] { return suite_place_dependence(); }));
  jobs.push_back(std::async(std::launch::async, [] { return suite_symbolic(); }));
  std::vector<SuiteResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.suite < b.suite; });
  return out;
}

inline bool all_pass(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.all_pass; });
}

}  // namespace qift
