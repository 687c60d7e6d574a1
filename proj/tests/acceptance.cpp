// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "qift/qift.hpp"

using namespace qift;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string vtext(const PadicField& f, const Vector<PadicField>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + f.format(x, 6);
  return "(" + s + ")";
}

// 1. Non-archimedean solver soundness.
Outcome criterion1() {
  Outcome o;
  int instances = 0, max_iters = 0;
  const int cap = nonarch_iteration_cap(64);
  for (std::uint32_t p : gen::primes()) {
    const PadicField f(p);
    for (int k = 0; k < 500; ++k) {
      gen::Rng r(1000003ull * p + static_cast<std::uint64_t>(k));
      const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
      const auto phi = PolyMap<PadicField>::from_rational(f, gen::integer_map(r, n, 3, 3));
      Vector<PadicField> P;
      Padic JP;
      for (int tries = 0;; ++tries) {
        P = gen::padic_point(r, f, n);
        JP = phi.jacobian_det_at(P);
        if (!JP.is_zero()) break;
      }
      const std::int64_t vJ = JP.valuation();
      Vector<PadicField> res;
      for (std::size_t i = 0; i < n; ++i)
        res.push_back(i == 0 || r.coin(0.7) ? gen::padic(r, f, 2 * vJ + 1, 2 * vJ + 6) : f.zero());
      const Vector<PadicField> q = vec_sub<PadicField>(phi.eval(P), res);
      const std::int64_t vr = log_inv_norm(f, vec_sub<PadicField>(phi.eval(P), q)).valuation.value();
      const auto bundle = certify_nonarch(phi, Box{1.0, 1.0});
      const std::string ctx = "p=" + std::to_string(p) + " map " + std::to_string(k) + " P=" + vtext(f, P);
      ++instances;
      if (!basin_test(phi, P, q, bundle)) {
        o.fail("not in basin: " + ctx);
        continue;
      }
      const auto out = solve(phi, P, q, bundle);
      if (!out.solved()) {
        o.fail(std::string(to_string(out.status)) + " " + out.violation + ": " + ctx);
        continue;
      }
      max_iters = std::max(max_iters, out.iterations);
      if (out.iterations > cap) o.fail("iteration cap exceeded: " + ctx);
      for (const auto& rec : out.trace.records) {
        const Padic Ji = phi.jacobian_det_at(rec.Q);
        if (Ji.is_zero() || Ji.valuation() != vJ) o.fail("v(J(Q_i)) changed at step " + std::to_string(rec.index) + ": " + ctx);
      }
      // ||P - Q|| <= ||phi(P) - q|| / |J(P)| in valuations.
      const auto d = vec_sub<PadicField>(P, *out.Q);
      const auto vd = log_inv_norm(f, d).valuation.value();
      if (vd < vr - vJ) o.fail("final bound: " + ctx);
    }
  }
  o.detail = std::to_string(instances) + " instances, max iterations " + std::to_string(max_iters) + " (cap " +
             std::to_string(cap) + ")";
  return o;
}

// 2. Oracle equivalence for N = 1.
Outcome criterion2() {
  Outcome o;
  int instances = 0;
  std::int64_t min_digits = Padic::kInfinity;
  std::int64_t min_margin = Padic::kInfinity;
  for (std::uint32_t p : gen::primes()) {
    const PadicField f(p);
    int made = 0;
    for (std::uint64_t k = 0; made < 200; ++k) {
      gen::Rng r(7000003ull * p + k);
      const int degree = static_cast<int>(r.integer(1, 4));
      const auto g = lift(f, gen::monic(r, degree));
      const auto roots = all_roots(g);
      std::vector<Padic> simple;
      for (const auto& x : roots)
        if (x.multiplicity == 1 && !g.derivative().eval(x.root).is_zero()) simple.push_back(x.root);
      if (simple.empty()) continue;
      const Padic alpha = simple[r.index(simple.size())];
      const std::int64_t vJ = g.derivative().eval(alpha).valuation();
      const std::int64_t depth = vJ + 1 + r.integer(0, 3);
      const Padic P = f.from_rational(mpz_class(alpha.residue(depth)), 1);
      const PolyMap<PadicField> phi(f, {g.to_mpoly()});
      const auto bundle = certify_nonarch(phi, Box{1.0, 1.0});
      if (!basin_test(phi, {P}, {f.zero()}, bundle)) continue;
      ++made;
      ++instances;
      const auto out = solve(phi, {P}, {f.zero()}, bundle);
      const std::string ctx = "p=" + std::to_string(p) + " g=" + g.to_string() + " P=" + f.format(P, 6);
      if (!out.solved()) {
        o.fail(std::string(to_string(out.status)) + ": " + ctx);
        continue;
      }
      // Nearest oracle root to P.
      const Padic* best = nullptr;
      std::int64_t best_v = -Padic::kInfinity;
      for (const auto& x : roots) {
        const Padic d = x.root - P;
        const std::int64_t v = d.is_zero() ? Padic::kInfinity : d.valuation();
        if (v > best_v) best_v = v, best = &x.root;
      }
      const Padic Q = (*out.Q)[0];
      const std::int64_t digits = std::min(Q.absprec(), best->absprec());
      min_digits = std::min(min_digits, digits);
      if (!(Q - *best).is_zero()) o.fail("solver and oracle differ: " + ctx);
      min_margin = std::min(min_margin, Q.absprec() - (64 - 2 * vJ));
      if (Q.absprec() < 64 - 2 * vJ) o.fail("solver certified only " + std::to_string(Q.absprec()) + " digits: " + ctx);
    }
  }
  o.detail = std::to_string(instances) + " polynomials, agreement to at least " + std::to_string(min_digits) +
             " p-adic digits, certified precision exceeds 64 - 2 v(g'(root)) by at least " + std::to_string(min_margin);
  return o;
}

// Independent evaluation of the four admissibility inequalities in long double.
// Returns the name of the first one that fails, empty when all hold.
std::string admissible_independent(const ConstantBundle& b) {
  using L = long double;
  const L eta = b.eta, key = b.C_key, lin = static_cast<L>(b.C_tayJ) * key * eta;
  if (!(lin < 1)) return "C_tayJ C_key eta = " + fmt(static_cast<double>(lin));
  const L contract = static_cast<L>(b.C_tayf) * key * key * std::pow(eta, static_cast<L>(b.epsilon)) / ((1 - lin) * (1 - lin));
  if (!(contract <= 1)) return "residual contraction " + fmt(static_cast<double>(contract));
  L sum = 0, e = 1;
  for (int j = 0; j < 200; ++j) {
    const L t = std::pow(eta, e);
    sum += t;
    if (t < 1e-30L) break;
    e *= 2 - static_cast<L>(b.epsilon);
  }
  const L reach = static_cast<L>(b.box.b1) + static_cast<L>(b.C_Jbd) * key * sum;
  if (!(reach <= static_cast<L>(b.box.b2) * (1 + 1e-12L))) return "iterates reach " + fmt(static_cast<double>(reach));
  const L tau = static_cast<L>(b.C_tayf) * key * key * eta / (1 - lin);
  if (!(tau < 1)) return "tau = " + fmt(static_cast<double>(tau));
  return {};
}

// 3 and 4. Archimedean certified basin and quadratic decay.
struct ArchStats {
  Outcome basin, decay;
};

ArchStats criteria3and4() {
  ArchStats s;
  const RealField R;
  int maps = 0, pairs = 0, floor_checks = 0, tolerance_used = 0;
  double eta_min = kInf;
  for (int k = 0; k < 100; ++k) {
    gen::Rng r(424242ull + static_cast<std::uint64_t>(k));
    const std::size_t n = 1 + static_cast<std::size_t>(k % 2);
    const auto phi = PolyMap<RealField>::from_rational(R, gen::small_real_map(r, n, 3, 3));
    ConstantBundle b;
    try {
      b = certify_arch(phi, Box{1.0, 2.0}, 0.5);
    } catch (const Error& e) {
      s.basin.fail(std::string(e.what()) + " for " + phi.to_string());
      continue;
    }
    ++maps;
    eta_min = std::min(eta_min, b.eta);
    if (!check_admissible(b).all()) s.basin.fail("bundle reports inadmissible: " + phi.to_string());
    if (const auto why = admissible_independent(b); !why.empty()) s.basin.fail(why + ": " + phi.to_string());
    const double growth = b.C_Jbd * b.C_key, decay = b.C_tayf * b.C_key * b.C_key;
    for (int j = 0; j < 200; ++j) {
      Vector<RealField> P, q;
      for (;;) {
        P = gen::real_point(r, n, 1.0);
        const double J = std::abs(phi.jacobian_det_at(P));
        if (J == 0.0) continue;
        Vector<RealField> res(n);
        const double size = r.real(0.0, 0.999) * b.eta * J * J;
        for (std::size_t i = 0; i < n; ++i) res[i] = size * r.real(-1.0, 1.0);
        res[r.index(n)] = r.coin() ? size : -size;
        q = vec_sub<RealField>(phi.eval(P), res);
        if (basin_test(phi, P, q, b)) break;
      }
      ++pairs;
      const auto out = solve(phi, P, q, b);
      const std::string ctx = phi.to_string() + " P=" + fmt(P[0]);
      if (!out.solved()) {
        const std::string why = std::string(to_string(out.status)) + " " + out.violation + ": " + ctx;
        (out.violation == "residual_decayed" ? s.decay : s.basin).fail(why);
        continue;
      }
      if (out.bound_lhs > out.bound_rhs * (1.0 + 1e-9)) ++tolerance_used;
      // Recheck every record from the raw numbers.
      double c_sum = 0.0, prev_r = 0.0, prev_j = 0.0, prev_point = 0.0;
      for (const auto& rec : out.trace.records) {
        const double ci = c_schedule(b.eta, b.epsilon, rec.index);
        const double floor = residual_floor(phi, rec.Q, q, rec.index == 0 ? 0.0 : prev_point);
        const bool a = rec.point_norm <= (b.box.b1 + growth * c_sum) * (1.0 + 1e-9);
        const bool bb = rec.jacobian_abs > 0.0;
        const bool c = rec.residual_norm <= ci * rec.jacobian_abs * rec.jacobian_abs * (1.0 + 1e-9) + floor;
        if (rec.residual_norm > ci * rec.jacobian_abs * rec.jacobian_abs * (1.0 + 1e-9)) ++floor_checks;
        if (!(a && bb && c)) s.basin.fail("claim check at step " + std::to_string(rec.index) + ": " + ctx);
        if (rec.index > 0) {
          const double bound = decay * prev_r * prev_r / (prev_j * prev_j);
          if (!(rec.residual_norm <= bound * (1.0 + 1e-9) + floor)) s.decay.fail("decay at step " + std::to_string(rec.index) + ": " + ctx);
          if (rec.residual_norm > bound * (1.0 + 1e-9)) ++floor_checks;
        }
        c_sum += ci;
        prev_point = rec.point_norm;
        prev_r = rec.residual_norm;
        prev_j = rec.jacobian_abs;
      }
      if (!out.satisfied) s.basin.fail("final bound: " + ctx);
    }
  }
  s.basin.detail = std::to_string(maps) + " maps, " + std::to_string(pairs) + " pairs, min eta " + fmt(eta_min) + ", " +
                   std::to_string(floor_checks) + " checks at the rounding floor, " + std::to_string(tolerance_used) +
                   " final bounds needing the last-iterate tolerance";
  s.decay.detail = "per-step decay on the same traces";
  return s;
}

// 5. Continuity-of-roots scaling.
Outcome criterion5() {
  Outcome o;
  const RealField R;
  const auto f = parse_unipoly(R, "t^2 - 1");
  std::vector<double> xs, ys;
  double worst = 0.0;
  for (int e = 2; e <= 8; ++e) {
    const double eps = std::pow(10.0, -e);
    const auto g = f + UniPoly<RealField>(R, {eps});
    const auto res = shift_root(f, g, 1.0);
    const double dist = std::abs(1.0 - res.beta);
    const double ratio = dist * 2.0 / eps;
    worst = std::max(worst, ratio);
    if (!(ratio <= 1.01)) o.fail("ratio " + fmt(ratio) + " at eps " + fmt(eps));
    if (!res.satisfied) o.fail("shift bound at eps " + fmt(eps));
    xs.push_back(std::log(eps));
    ys.push_back(std::log(dist));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!(std::abs(slope - 1.0) <= 0.05)) o.fail("slope " + fmt(slope));
  o.detail = "slope " + fmt(slope) + ", max |a-b||f'(a)|/|f-g| = " + fmt(worst);
  return o;
}

// 6. Counterexample reproduction.
Outcome criterion6() {
  Outcome o;
  const double log3 = std::log(3.0);
  double worst_ratio_gap = 0.0;
  for (int m = 2; m <= 12; ++m) {
    for (double kappa : {1.0, 1.25, 1.5, 2.0}) {
      const auto r = run_example_squaring_product(3, m, kappa);
      const std::string ctx = "m=" + std::to_string(m) + " kappa=" + fmt(kappa);
      worst_ratio_gap = std::max(worst_ratio_gap, std::abs(r.ratio - kappa) * m);
      if (!(std::abs(r.ratio - kappa) <= 2.0 / m)) o.fail("ratio " + fmt(r.ratio) + ": " + ctx);
      if (!(r.margin >= (2.0 - kappa) * m * log3 - log3 - 1e-12)) o.fail("margin " + fmt(r.margin) + ": " + ctx);
      if (kappa < 2.0 && !r.equality_violated) o.fail("equality not violated: " + ctx);
      if (!r.distribution.holds) o.fail("distribution inequality: " + ctx);
    }
  }
  o.detail = "44 cases, max m |ratio - kappa| = " + fmt(worst_ratio_gap);
  return o;
}

// 7. Distribution and separation suites.
Outcome criterion7() {
  Outcome o;
  const auto dist = suite_distribution(7, 500);
  const auto eq = suite_distribution_equality(7, 500);
  const auto sep = suite_separation(7, 200, std::nullopt);
  double min_dist = kInf, min_sep = kInf;
  for (const auto& c : dist.cases) {
    if (!c.exact || !c.holds || c.slack < 0) o.fail(c.name + ": " + c.context);
    min_dist = std::min(min_dist, c.slack);
  }
  for (const auto& c : eq.cases)
    if (!c.exact || c.slack != 0.0) o.fail(c.name + ": " + c.context);
  for (const auto& c : sep.cases) {
    if (!c.holds) o.fail(c.name + ": " + c.context);
    min_sep = std::min(min_sep, c.slack);
  }
  o.detail = std::to_string(dist.cases.size()) + " distribution (min slack " + fmt(min_dist) + "), " +
             std::to_string(eq.cases.size()) + " equality, " + std::to_string(sep.cases.size()) +
             " separation (min slack " + fmt(min_sep) + ")";
  return o;
}

// 8. Symbolic checks.
Outcome criterion8() {
  Outcome o;
  const auto c = check_symbolic_counterexamples();
  if (!c.ex33_degree2_not_in_product_ideal) o.fail("degree-2 element in the product ideal");
  if (!c.rem510_in_I2) o.fail("xy - zw not exhibited in I2");
  if (!c.rem510_not_in_I1) o.fail("xy - zw not excluded from I1");
  if (!c.jacobian_matches_ramification) o.fail("Jacobian determinant");
  o.detail = "linear part " + c.quadric_linear_part;
  return o;
}

// 9. Place dependence.
Outcome criterion9() {
  Outcome o;
  for (int n = 1; n <= 6; ++n) {
    const auto r = run_example_place_dependence(3, 5, 3, 5, n);
    const std::string ctx = "n=" + std::to_string(n);
    if (r.sign_at_v == r.sign_at_w) o.fail("same sign: " + ctx);
    if (!(r.margin_v >= (n - 1) * std::log(3.0))) o.fail("margin at 3: " + ctx);
    if (!(r.margin_w >= (n - 1) * std::log(5.0))) o.fail("margin at 5: " + ctx);
    if (!r.solver_agrees) o.fail("Newton from 1 picks the other root: " + ctx);
  }
  o.detail = "n = 1..6, signs (-, +)";
  return o;
}

// 10. Taylor bound.
Outcome criterion10() {
  Outcome o;
  const auto s = suite_taylor(11, 1000);
  int exact = 0;
  for (const auto& c : s.cases) {
    if (!c.holds) o.fail(c.name + ": " + c.context);
    exact += c.exact;
  }
  o.detail = std::to_string(s.cases.size()) + " instances over real, complex and Q_p (" + std::to_string(exact) +
             " exact)";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
};

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](const Criterion& c, const Outcome& o, double secs) {
    const bool ok = o.pass && secs < c.limit_s;
    all = all && ok;
    std::printf("%s  %2d  %-44s %7.3f s (limit %g s)  %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs, c.limit_s,
                o.detail.c_str());
    if (!o.pass) std::printf("          first failure: %s\n", o.first_failure.c_str());
    if (secs >= c.limit_s) std::printf("          over the time limit\n");
    std::fflush(stdout);
  };
  auto timed = [&](const Criterion& c, const std::function<Outcome()>& fn) {
    const auto t0 = clock::now();
    const Outcome o = fn();
    report(c, o, std::chrono::duration<double>(clock::now() - t0).count());
  };

  timed({1, "non-archimedean solver soundness", 10}, criterion1);
  timed({2, "non-archimedean oracle equivalence", 10}, criterion2);
  {
    const auto t0 = clock::now();
    const auto s = criteria3and4();
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    report({3, "archimedean certified basin", 20}, s.basin, secs);
    report({4, "quadratic convergence signature", 20}, s.decay, secs);
  }
  timed({5, "continuity-of-roots scaling", 1}, criterion5);
  timed({6, "counterexample reproduction", 1}, criterion6);
  timed({7, "distribution and separation suites", 5}, criterion7);
  timed({8, "symbolic checks", 0.1}, criterion8);
  timed({9, "place dependence", 0.5}, criterion9);
  timed({10, "Taylor bound", 2}, criterion10);
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
