#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qift/bounds.hpp"
#include "qift/certify.hpp"
#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/linalg.hpp"
#include "qift/mpoly.hpp"

namespace qift {

enum class SolveStatus { Solved, OutsideBasin, SingularJacobian, PrecisionExhausted, NoConvergence, ClaimViolation };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::OutsideBasin: return "OutsideBasin";
    case SolveStatus::SingularJacobian: return "SingularJacobian";
    case SolveStatus::PrecisionExhausted: return "PrecisionExhausted";
    case SolveStatus::NoConvergence: return "NoConvergence";
    case SolveStatus::ClaimViolation: return "ClaimViolation";
  }
  return "Unknown";
}

// Archimedean runs reuse the names: ball_contained is the norm bound on Q_i,
// jacobian_stable is J(Q_i) != 0, in_basin is ||phi(Q_i) - q|| <= c_i |J(Q_i)|^2 and
// residual_decayed is the quadratic decay of the residual.
struct IterationChecks {
  bool in_basin = true;
  bool jacobian_stable = true;
  bool residual_decayed = true;
  bool ball_contained = true;

  bool all() const { return in_basin && jacobian_stable && residual_decayed && ball_contained; }
  std::string first_failure() const {
    if (!ball_contained) return "ball_contained";
    if (!jacobian_stable) return "jacobian_stable";
    if (!in_basin) return "in_basin";
    if (!residual_decayed) return "residual_decayed";
    return "";
  }
};

template <ValuedField F>
struct IterationRecord {
  int index = 0;
  Vector<F> Q;
  LogDistance residual_log;
  LogDistance jacobian_log;
  std::optional<LogDistance> step_log;
  double residual_norm = 0;
  double jacobian_abs = 0;
  double point_norm = 0;
  std::optional<double> schedule;  // c_i
  IterationChecks checks;
};

template <ValuedField F>
struct NewtonTrace {
  std::vector<IterationRecord<F>> records;
  std::vector<double> schedule;
};

template <ValuedField F>
struct SolveOutcome {
  SolveStatus status = SolveStatus::NoConvergence;
  std::optional<Vector<F>> Q;
  double bound_lhs = 0;
  double bound_rhs = 0;
  double bound_tolerance = 0;
  bool satisfied = false;
  bool certified = false;
  int iterations = 0;
  int max_iters = 0;
  std::optional<std::int64_t> certified_absprec;  // Q_p: Q is known modulo p^certified_absprec
  std::optional<int> violation_step;
  std::string violation;
  std::string message;
  NewtonTrace<F> trace;
  ConstantBundle bundle;

  bool solved() const { return status == SolveStatus::Solved; }
};

struct SolveOptions {
  int max_iters = 0;            // 0: the field's default cap
  bool enforce_basin = true;    // refuse to start outside the certified basin
  double tolerance = 1e-12;     // archimedean: stop when residual < tolerance (1 + ||q||)
  double relative_slack = 1e-9; // archimedean inequality checks
};

inline int nonarch_iteration_cap(std::int32_t digits) {
  return static_cast<int>(2.0 * std::ceil(std::log2(static_cast<double>(std::max(digits, 1))))) + 8;
}
inline constexpr int kArchIterationCap = 64;

/// Rounding floor for an archimedean residual ||phi(x) - q|| computed in double arithmetic.
/// When x came out of a Newton step from a point of norm prev_scale, the rounding of that
/// subtraction is propagated through the Jacobian as well.
template <ValuedField F>
double residual_floor(const PolyMap<F>& phi, const Vector<F>& x, const Vector<F>& q, double prev_scale = 0.0) {
  if constexpr (!F::archimedean || std::same_as<F, RationalField>) {
    return 0.0;
  } else {
    double scale = 0.0;
    double terms = 0.0;
    double slope = 0.0;
    for (std::size_t i = 0; i < phi.dim(); ++i) {
      scale = std::max(scale, phi[i].abs_eval(x) + phi.field().abs(q[i]));
      terms = std::max(terms, static_cast<double>(phi[i].size()));
      if (prev_scale > 0.0) {
        double row = 0.0;
        for (std::size_t j = 0; j < phi.dim(); ++j) row += phi[i].partial(j).abs_eval(x);
        slope = std::max(slope, row);
      }
    }
    const double k = static_cast<double>(phi.degree()) + terms + static_cast<double>(phi.dim()) + 2.0;
    const double step = 4.0 * kUnitRoundoff * std::max(prev_scale, sup_norm(phi.field(), x)) * slope;
    return 8.0 * k * kUnitRoundoff * scale + step;
  }
}

namespace detail {

inline std::int64_t min_val(const Vector<PadicField>& v) {
  std::int64_t m = Padic::kInfinity;
  for (const auto& c : v) m = std::min(m, c.valuation());
  return m;
}

inline std::int64_t min_absprec(const Vector<PadicField>& v) {
  std::int64_t m = Padic::kInfinity;
  for (const auto& c : v) m = std::min(m, c.absprec());
  return m;
}

// ||x|| <= radius with the comparison done on valuations when the radius is p^k.
inline bool padic_norm_within(const PadicField& f, const Vector<PadicField>& x, double radius) {
  const double k = std::log(radius) / std::log(static_cast<double>(f.p));
  if (std::abs(k - std::round(k)) < 1e-12) {
    const auto v = min_val(x);
    return v >= Padic::kInfinity || -v <= static_cast<std::int64_t>(std::llround(k));
  }
  return sup_norm(f, x) <= radius;
}

template <ValuedField F>
void check_dims(const PolyMap<F>& phi, const Vector<F>& P, const Vector<F>& q) {
  if (P.size() != phi.dim() || q.size() != phi.dim())
    throw Error(ErrorCode::InvalidArgument, "point and target must have the map's dimension");
}

}  // namespace detail

/// True iff phi(P) = q, or J(P) != 0, P lies in the inner box and the residual is inside the
/// basin: ||phi(P) - q|| <= C1 |J(P)|^2 (strict over Q_p).
template <ValuedField F>
bool basin_test(const PolyMap<F>& phi, const Vector<F>& P, const Vector<F>& q, const ConstantBundle& b) {
  detail::check_dims(phi, P, q);
  const F& fld = phi.field();
  const Vector<F> r = vec_sub<F>(phi.eval(P), q);
  if (vec_is_zero(fld, r)) return true;
  const auto J = phi.jacobian_at(P).det();
  if (fld.is_zero(J)) return false;
  if constexpr (F::archimedean) {
    if (sup_norm(fld, P) > b.box.b1) return false;
    const double j = fld.abs(J);
    return sup_norm(fld, r) <= b.C1_basin * j * j;
  } else {
    if (!detail::padic_norm_within(fld, P, b.box.b1)) return false;
    if (std::isinf(b.C1_basin)) return true;
    if (b.log_p_C1) return detail::min_val(r) > 2 * J.valuation() - *b.log_p_C1;
    const double j = fld.abs(J);
    return sup_norm(fld, r) < b.C1_basin * j * j;
  }
}

/// Non-archimedean Newton iteration with the adjugate update
/// Q_{i+1} = Q_i - adj(Dphi(Q_i)) (phi(Q_i) - q) / J(Q_i).
inline SolveOutcome<PadicField> solve_nonarch(const PolyMap<PadicField>& phi, const Vector<PadicField>& P,
                                              const Vector<PadicField>& q, const ConstantBundle& bundle,
                                              const SolveOptions& opts = {}) {
  detail::check_dims(phi, P, q);
  using V = Vector<PadicField>;
  const PadicField& fld = phi.field();
  SolveOutcome<PadicField> out;
  out.bundle = bundle;
  out.max_iters = opts.max_iters > 0 ? opts.max_iters : nonarch_iteration_cap(fld.digits);

  try {
    const V r0 = vec_sub<PadicField>(phi.eval(P), q);
    const Padic JP = phi.jacobian_at(P).det();
    const bool zero_residual = vec_is_zero(fld, r0);

    if (!zero_residual) {
      if (JP.is_zero()) {
        out.status = SolveStatus::SingularJacobian;
        out.message = "J(P) = 0";
        return out;
      }
      if (opts.enforce_basin && !basin_test(phi, P, q, bundle)) {
        out.status = SolveStatus::OutsideBasin;
        out.message = "residual not below C1 |J(P)|^2 or P outside the inner box";
        return out;
      }
    }
    out.certified = opts.enforce_basin;
    const std::int64_t vJ = JP.is_zero() ? Padic::kInfinity : JP.valuation();
    const std::int64_t key_exp = bundle.log_p_C_key.value_or(0);
    const std::int64_t decay_exp = bundle.log_p_C_tayf.value_or(0) + 2 * key_exp;

    V Qi = P;
    std::int64_t prev_rv = 0;
    // Valuation below which the residual of a re-anchored iterate is not determined.
    std::int64_t noise_floor = Padic::kInfinity;
    for (int i = 0;; ++i) {
      const V ri = i == 0 ? r0 : vec_sub<PadicField>(phi.eval(Qi), q);
      const auto Dphi = phi.jacobian_at(Qi);
      const Padic Ji = Dphi.det();

      IterationRecord<PadicField> rec;
      rec.index = i;
      rec.Q = Qi;
      rec.residual_log = log_inv_norm(fld, ri);
      rec.jacobian_log = log_inv_abs(fld, Ji);
      rec.residual_norm = sup_norm(fld, ri);
      rec.jacobian_abs = fld.abs(Ji);
      rec.point_norm = sup_norm(fld, Qi);
      const bool rzero = vec_is_zero(fld, ri);
      const std::int64_t rv = detail::min_val(ri);
      if (!zero_residual) {
        rec.checks.jacobian_stable = !Ji.is_zero() && Ji.valuation() == vJ;
        rec.checks.ball_contained = detail::padic_norm_within(fld, Qi, bundle.box.b2);
        if (!rzero) {
          if (std::isinf(bundle.C1_basin)) rec.checks.in_basin = true;
          else if (bundle.log_p_C1) rec.checks.in_basin = !Ji.is_zero() && rv > 2 * Ji.valuation() - *bundle.log_p_C1;
          else rec.checks.in_basin = rec.residual_norm < bundle.C1_basin * rec.jacobian_abs * rec.jacobian_abs;
          if (i > 0) {
            // Re-anchoring Q_i perturbs the residual at the precision of the previous one.
            if (bundle.log_p_C_tayf)
              rec.checks.residual_decayed = rv >= std::min(2 * prev_rv - 2 * vJ - decay_exp, noise_floor);
            else if (bundle.C_tayf == 0.0) rec.checks.residual_decayed = rv >= noise_floor;
            else {
              const double prev = std::pow(static_cast<double>(fld.p), -static_cast<double>(prev_rv));
              rec.checks.residual_decayed =
                  rec.residual_norm <= bundle.C_tayf * bundle.C_key * bundle.C_key * prev * prev / (fld.abs(JP) * fld.abs(JP));
            }
          }
        }
      }
      out.trace.records.push_back(rec);

      if (out.certified && !rec.checks.all()) {
        out.status = SolveStatus::ClaimViolation;
        out.violation_step = i;
        out.violation = rec.checks.first_failure();
        out.iterations = i;
        return out;
      }

      if (rzero || (i > 0 && rv >= noise_floor)) {
        out.iterations = i;
        break;
      }
      if (i >= out.max_iters) {
        out.status = SolveStatus::NoConvergence;
        out.iterations = i;
        out.message = "iteration cap reached";
        return out;
      }
      if (Ji.is_zero()) {
        out.status = SolveStatus::SingularJacobian;
        out.iterations = i;
        out.message = "J(Q_i) = 0";
        return out;
      }
      const V step = Dphi.apply_inverse(ri);
      V next = vec_sub<PadicField>(Qi, step);
      out.trace.records.back().step_log = delta(fld, Qi, next);
      // Newton is self-correcting: treat the computed digits as an exact representative.
      // The residual then moves by Dphi applied to the discarded uncertainty.
      std::int64_t entry_val = 0;
      for (const auto& row : Dphi.entries())
        for (const auto& e : row)
          if (!e.is_zero()) entry_val = std::min(entry_val, e.valuation());
      noise_floor = detail::min_absprec(next) + entry_val;
      for (auto& c : next) c = c.lifted();
      Qi = std::move(next);
      prev_rv = rv;
    }

    // The limit lies within C_key ||r|| / |J| of the last iterate.
    const V rf = vec_sub<PadicField>(phi.eval(Qi), q);
    std::int64_t cert = detail::min_absprec(Qi);
    if (!zero_residual)
      cert = std::min(cert, std::min(detail::min_val(rf), detail::min_absprec(rf)) - vJ - key_exp);
    V Q;
    for (const auto& c : Qi) Q.push_back(c.truncated(cert));
    out.certified_absprec = cert >= Padic::kInfinity ? std::nullopt : std::optional<std::int64_t>(cert);

    const V diff = vec_sub<PadicField>(P, Q);
    out.bound_lhs = sup_norm(fld, diff) * fld.abs(JP);
    out.bound_rhs = bundle.C2_lipschitz * sup_norm(fld, r0);
    if (zero_residual || vec_is_zero(fld, diff)) {
      out.satisfied = true;
    } else if (bundle.log_p_C_key) {
      out.satisfied = detail::min_val(diff) + vJ >= detail::min_val(r0) - *bundle.log_p_C_key;
    } else {
      out.satisfied = out.bound_lhs <= out.bound_rhs;
    }
    out.Q = std::move(Q);
    out.status = SolveStatus::Solved;
    if (out.certified && !out.satisfied) {
      out.status = SolveStatus::ClaimViolation;
      out.violation = "final_bound";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    out.status = SolveStatus::PrecisionExhausted;
    out.message = e.what();
  }
  return out;
}

/// Archimedean Newton iteration Q_{i+1} = Q_i - Dphi(Q_i)^{-1} (phi(Q_i) - q) with the
/// schedule c_i = eta^((2 - eps)^i) and the per-step claims checked.
template <ValuedField F>
  requires(F::archimedean)
SolveOutcome<F> solve_arch(const PolyMap<F>& phi, const Vector<F>& P, const Vector<F>& q,
                           const ConstantBundle& bundle, const SolveOptions& opts = {}) {
  detail::check_dims(phi, P, q);
  using V = Vector<F>;
  const F& fld = phi.field();
  SolveOutcome<F> out;
  out.bundle = bundle;
  out.max_iters = opts.max_iters > 0 ? opts.max_iters : kArchIterationCap;
  const double slack = 1.0 + opts.relative_slack;

  const V r0 = vec_sub<F>(phi.eval(P), q);
  const double r0n = sup_norm(fld, r0);
  const auto JP = phi.jacobian_at(P).det();
  const double jP = fld.abs(JP);
  const double qn = sup_norm(fld, q);

  if (r0n > 0.0) {
    if (jP == 0.0) {
      out.status = SolveStatus::SingularJacobian;
      out.message = "J(P) = 0";
      return out;
    }
    if (opts.enforce_basin && !basin_test(phi, P, q, bundle)) {
      out.status = SolveStatus::OutsideBasin;
      out.message = "residual above eta |J(P)|^2 or P outside the inner box";
      return out;
    }
  }
  out.certified = opts.enforce_basin;
  const double growth = bundle.C_Jbd * bundle.C_key;
  const double decay = bundle.C_tayf * bundle.C_key * bundle.C_key;

  V Qi = P;
  double c_sum = 0.0;
  double prev_r = r0n, prev_j = jP, prev_point = 0.0;
  double final_r = r0n, final_j = jP;
  for (int i = 0;; ++i) {
    const V ri = i == 0 ? r0 : vec_sub<F>(phi.eval(Qi), q);
    const auto Dphi = phi.jacobian_at(Qi);
    const auto Ji = Dphi.det();
    const double rn = sup_norm(fld, ri);
    const double jn = fld.abs(Ji);
    const double floor = residual_floor(phi, Qi, q, i == 0 ? 0.0 : prev_point);
    const double ci = c_schedule(bundle.eta, bundle.epsilon, i);

    IterationRecord<F> rec;
    rec.index = i;
    rec.Q = Qi;
    rec.residual_log = log_inv_norm(fld, ri);
    rec.jacobian_log = log_inv_abs(fld, Ji);
    rec.residual_norm = rn;
    rec.jacobian_abs = jn;
    rec.point_norm = sup_norm(fld, Qi);
    rec.schedule = ci;
    out.trace.schedule.push_back(ci);
    if (r0n > 0.0) {
      rec.checks.ball_contained = rec.point_norm <= (bundle.box.b1 + growth * c_sum) * slack;
      rec.checks.jacobian_stable = jn > 0.0;
      rec.checks.in_basin = rn <= ci * jn * jn * slack + floor;
      if (i > 0) rec.checks.residual_decayed = rn <= decay * prev_r * prev_r / (prev_j * prev_j) * slack + floor;
    }
    out.trace.records.push_back(rec);
    final_r = rn;
    final_j = jn;

    if (out.certified && !rec.checks.all()) {
      out.status = SolveStatus::ClaimViolation;
      out.violation_step = i;
      out.violation = rec.checks.first_failure();
      out.iterations = i;
      return out;
    }
    if (rn < opts.tolerance * (1.0 + qn) || rn <= floor) {
      out.iterations = i;
      break;
    }
    if (i >= out.max_iters) {
      out.status = SolveStatus::NoConvergence;
      out.iterations = i;
      out.message = "iteration cap reached";
      return out;
    }
    if (jn == 0.0) {
      out.status = SolveStatus::SingularJacobian;
      out.iterations = i;
      out.message = "J(Q_i) = 0";
      return out;
    }
    V next = vec_sub<F>(Qi, Dphi.apply_inverse(ri));
    out.trace.records.back().step_log = delta(fld, Qi, next);
    Qi = std::move(next);
    c_sum += ci;
    prev_point = rec.point_norm;
    prev_r = rn;
    prev_j = jn;
  }

  out.bound_lhs = sup_norm(fld, vec_sub<F>(P, Qi)) * jP;
  out.bound_rhs = bundle.C2_lipschitz * r0n;
  // Distance from the last iterate to the exact preimage, scaled like the left side.
  out.bound_tolerance = final_j > 0.0 ? bundle.C2_lipschitz * jP * final_r / final_j : 0.0;
  out.satisfied = r0n == 0.0 || out.bound_lhs <= out.bound_rhs * slack + out.bound_tolerance;
  out.Q = Qi;
  out.status = SolveStatus::Solved;
  if (out.certified && !out.satisfied) {
    out.status = SolveStatus::ClaimViolation;
    out.violation = "final_bound";
  }
  return out;
}

/// Dispatches on the field.
template <ValuedField F>
SolveOutcome<F> solve(const PolyMap<F>& phi, const Vector<F>& P, const Vector<F>& q, const ConstantBundle& bundle,
                      const SolveOptions& opts = {}) {
  if constexpr (F::archimedean) return solve_arch(phi, P, q, bundle, opts);
  else return solve_nonarch(phi, P, q, bundle, opts);
}

}  // namespace qift
