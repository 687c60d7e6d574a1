#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qift/bounds.hpp"
#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/mpoly.hpp"

namespace qift {

/// Explicit constants of the quantitative Newton iteration on a polydisc box.
///
/// Archimedean: the iteration started at P in B1 with ||phi(P) - q|| <= eta |J(P)|^2
/// stays in B2 and converges to Q with ||P - Q|| <= C2 ||phi(P) - q|| / |J(P)|.
/// Non-archimedean: the basin is ||phi(P) - q|| < C1 |J(P)|^2 (strict) and the
/// conclusion constant is C_key; tau is 0 and epsilon unused.
struct ConstantBundle {
  double C_Jbd = 0;
  double C_key = 0;
  double C_tayJ = 0;
  double C_tayf = 0;
  double epsilon = 0;
  double eta = 0;
  double tau = 0;
  double C1_basin = 0;
  double C2_lipschitz = 0;
  Box box{};
  bool archimedean = true;
  std::size_t dim = 0;
  // Over Q_p with b2 = 1 every constant is an integral power of p; these are the exact exponents.
  std::optional<std::int64_t> log_p_C1;
  std::optional<std::int64_t> log_p_C_key;
  std::optional<std::int64_t> log_p_C_tayf;
  std::map<std::string, std::string> provenance;
};

inline constexpr double kEtaLow = 1e-12;
inline constexpr double kEtaHigh = 0.5;
inline constexpr int kEtaBisections = 60;
inline constexpr double kEtaBackoff = 1e-9;
inline constexpr double kSeriesCutoff = 1e-18;

/// sum_{j >= 0} eta^((2 - eps)^j), summed until terms drop below the cutoff.
inline double c_series(double eta, double epsilon) {
  double sum = 0.0;
  double e = 1.0;
  for (int j = 0; j < 4096; ++j) {
    const double term = std::pow(eta, e);
    sum += term;
    if (term < kSeriesCutoff) break;
    e *= 2.0 - epsilon;
  }
  return sum;
}

/// c_i = eta^((2 - eps)^i)
inline double c_schedule(double eta, double epsilon, int i) {
  return std::pow(eta, std::pow(2.0 - epsilon, i));
}

inline double tau_of(double C_tayf, double C_key, double C_tayJ, double eta) {
  return C_tayf * C_key * C_key * eta / (1.0 - C_tayJ * C_key * eta);
}

struct Admissibility {
  bool jacobian_stays_nonzero = false;  // C_tayJ C_key eta < 1
  bool residual_contracts = false;      // C_tayf C_key^2 eta^eps / (1 - C_tayJ C_key eta)^2 <= 1
  bool iterates_in_box = false;         // b1 + C_Jbd C_key sum c_j <= b2
  bool tau_below_one = false;
  bool all() const { return jacobian_stays_nonzero && residual_contracts && iterates_in_box && tau_below_one; }
};

/// Independent evaluation of the admissibility conditions for a given eta.
inline Admissibility check_admissible(double C_Jbd, double C_key, double C_tayJ, double C_tayf, double epsilon,
                                      double eta, const Box& box) {
  Admissibility a;
  const double lin = C_tayJ * C_key * eta;
  a.jacobian_stays_nonzero = lin < 1.0;
  if (a.jacobian_stays_nonzero) {
    a.residual_contracts = C_tayf * C_key * C_key / ((1.0 - lin) * (1.0 - lin)) * std::pow(eta, epsilon) <= 1.0;
    a.tau_below_one = tau_of(C_tayf, C_key, C_tayJ, eta) < 1.0;
  }
  a.iterates_in_box = box.b1 + C_Jbd * C_key * c_series(eta, epsilon) <= box.b2;
  return a;
}

inline Admissibility check_admissible(const ConstantBundle& b) {
  return check_admissible(b.C_Jbd, b.C_key, b.C_tayJ, b.C_tayf, b.epsilon, b.eta, b.box);
}

template <ValuedField F>
void validate_map(const PolyMap<F>& phi) {
  if (phi.dim() == 0) throw Error(ErrorCode::InvalidArgument, "empty map");
}

/// C_Jbd, C_key, C_tayJ and C_tayf on the polydisc of radius r. Over R and C the adjugate
/// bound carries a factor N for the sup norm of a matrix-vector product.
template <ValuedField F>
ConstantBundle coefficient_bounds(const PolyMap<F>& phi, double r) {
  ConstantBundle b;
  const auto& J = phi.jacobian_det();
  b.C_Jbd = sup_bound(J, r);
  double adj_max = 0.0;
  for (const auto& row : phi.adjugate())
    for (const auto& e : row) adj_max = std::max(adj_max, sup_bound(e, r));
  b.C_key = F::archimedean ? static_cast<double>(phi.dim()) * adj_max : adj_max;
  b.C_tayJ = lipschitz_bound(J, r);
  for (const auto& c : phi.components()) b.C_tayf = std::max(b.C_tayf, second_order_bound(c, r));
  return b;
}

/// Constants for the archimedean iteration (real or complex field).
template <ValuedField F>
  requires(F::archimedean)
ConstantBundle certify_arch(const PolyMap<F>& phi, const Box& box_in, double epsilon = 0.5) {
  const Box box = Box::checked(box_in.b1, box_in.b2);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  validate_map(phi);
  const double r = box.b2;
  const std::size_t n = phi.dim();

  ConstantBundle b = coefficient_bounds(phi, r);
  b.archimedean = true;
  b.dim = n;
  b.box = box;
  b.epsilon = epsilon;

  auto ok = [&](double eta) {
    return check_admissible(b.C_Jbd, b.C_key, b.C_tayJ, b.C_tayf, epsilon, eta, box).all();
  };
  if (!ok(kEtaLow)) {
    throw Error(ErrorCode::NoAdmissibleEta, "no eta in [1e-12, 0.5] satisfies the admissibility conditions on box (" +
                                                detail::format_double(box.b1) + ", " + detail::format_double(box.b2) +
                                                ")");
  }
  double lo = kEtaLow, hi = kEtaHigh;
  if (ok(hi)) {
    lo = hi;
  } else {
    for (int it = 0; it < kEtaBisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ok(mid)) lo = mid;
      else hi = mid;
    }
    // Step back from the boundary so the inequalities hold with room beyond double rounding.
    lo *= 1.0 - kEtaBackoff;
  }
  b.eta = lo;
  b.tau = tau_of(b.C_tayf, b.C_key, b.C_tayJ, b.eta);
  b.C1_basin = b.eta;
  b.C2_lipschitz = b.C_key / (1.0 - b.tau);

  b.provenance = {
      {"C_Jbd", "sup of |J| on the outer polydisc: sum |c_m| b2^deg(m) over the Jacobian determinant"},
      {"C_key", "N times the largest coefficient bound of an adjugate entry on the outer polydisc; "
                "||Dphi(x)^-1 v|| <= C_key ||v|| / |J(x)|"},
      {"C_tayJ", "Lipschitz constant of J on the outer polydisc: sum of coefficient bounds of its partials"},
      {"C_tayf", "second-order Taylor constant: max over components of half the summed bounds of second partials"},
      {"epsilon", "schedule exponent, c_i = eta^((2 - epsilon)^i)"},
      {"eta", "largest eta in [1e-12, 0.5] (60 bisections) meeting all admissibility conditions"},
      {"tau", "C_tayf C_key^2 eta / (1 - C_tayJ C_key eta); per-step contraction of ||phi(Q_i) - q|| / |J(Q_i)|"},
      {"C1_basin", "eta: basin ||phi(P) - q|| <= C1 |J(P)|^2"},
      {"C2_lipschitz", "C_key / (1 - tau): ||P - Q|| <= C2 ||phi(P) - q|| / |J(P)|"},
  };
  return b;
}

namespace detail {

inline double inv_or_inf(double x) { return x == 0.0 ? kInf : 1.0 / x; }

inline bool is_unit_radius(double r) { return r == 1.0; }

}  // namespace detail

inline bool p_integral(const PolyMap<PadicField>& phi) {
  for (const auto& c : phi.components())
    if (min_valuation(c) < 0) return false;
  return true;
}

/// Constants for the non-archimedean iteration. The box may have b1 = b2: ultrametric
/// Newton steps never leave the ball they start in.
inline ConstantBundle certify_nonarch(const PolyMap<PadicField>& phi, const Box& box_in) {
  if (!(box_in.b1 > 0.0) || !(box_in.b2 >= box_in.b1) || !std::isfinite(box_in.b2))
    throw Error(ErrorCode::InvalidBox, "need b2 >= b1 > 0");
  validate_map(phi);
  const Box box = box_in;
  const double r = box.b2;

  ConstantBundle b = coefficient_bounds(phi, r);
  b.archimedean = false;
  b.dim = phi.dim();
  b.box = box;

  const bool unit = p_integral(phi) && box.b1 == 1.0 && box.b2 == 1.0;
  if (unit) {
    auto snap = [](double c) { return c > 0.0 ? 1.0 : 0.0; };
    b.C_Jbd = snap(b.C_Jbd);
    b.C_key = snap(b.C_key);
    b.C_tayJ = snap(b.C_tayJ);
    b.C_tayf = snap(b.C_tayf);
  }

  const double from_J = detail::inv_or_inf(b.C_tayJ * b.C_key);
  const double from_f = detail::inv_or_inf(b.C_tayf * b.C_key * b.C_key);
  const double from_box = b.C_key * b.C_Jbd == 0.0 ? kInf : box.b2 / (b.C_key * b.C_Jbd);
  b.C1_basin = std::min({from_J, from_f, from_box});
  b.eta = b.C1_basin;
  b.tau = 0.0;
  b.C2_lipschitz = b.C_key;

  if (detail::is_unit_radius(r)) {
    const std::uint32_t p = phi.field().p;
    auto lg = [&](double c) -> std::optional<std::int64_t> {
      if (c == 0.0) return std::nullopt;
      return static_cast<std::int64_t>(std::llround(std::log(c) / std::log(static_cast<double>(p))));
    };
    // At radius 1 each bound is p^k with k = -(a coefficient valuation).
    const auto ek = lg(b.C_key);
    const auto eJ = lg(b.C_tayJ);
    const auto ef = lg(b.C_tayf);
    const auto eb = lg(b.C_Jbd);
    std::int64_t c1 = Padic::kInfinity;
    if (ek && eJ) c1 = std::min(c1, -(*eJ + *ek));
    if (ek && ef) c1 = std::min(c1, -(*ef + 2 * *ek));
    if (ek && eb) c1 = std::min(c1, -(*ek + *eb));
    if (c1 < Padic::kInfinity) b.log_p_C1 = c1;
    b.log_p_C_key = ek;
    b.log_p_C_tayf = ef;
  }

  b.provenance = {
      {"C_Jbd", "sup of |J| on the outer polydisc: max |c_m| b2^deg(m) over the Jacobian determinant"},
      {"C_key", "largest coefficient bound of an adjugate entry; ||Dphi(x)^-1 v|| <= C_key ||v|| / |J(x)|"},
      {"C_tayJ", "Lipschitz constant of J: max |c_m| b2^(deg(m) - 1) from the divided-derivative expansion"},
      {"C_tayf", "second-order Taylor constant: max |c_m| b2^(deg(m) - 2) over all components"},
      {"epsilon", "not used by the ultrametric iteration"},
      {"eta", "equal to C1_basin"},
      {"tau", "0: the ultrametric iteration needs no geometric tail"},
      {"C1_basin", "min(1/(C_tayJ C_key), 1/(C_tayf C_key^2), b2/(C_key C_Jbd)); basin is strict: "
                   "||phi(P) - q|| < C1 |J(P)|^2"},
      {"C2_lipschitz", "C_key: ||P - Q|| <= C_key ||phi(P) - q|| / |J(P)|"},
  };
  if (unit) b.provenance["C_Jbd"] += "; p-integral map on the unit polydisc, rounded up to 1";
  return b;
}

/// Constants for whichever iteration fits the field.
template <ValuedField F>
ConstantBundle certify(const PolyMap<F>& phi, const Box& box, double epsilon = 0.5) {
  if constexpr (F::archimedean) return certify_arch(phi, box, epsilon);
  else return certify_nonarch(phi, box);
}

}  // namespace qift
