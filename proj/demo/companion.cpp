// Moves the root 1 of t^2 - 1 to the root of t^2 - 26 over Q_5 twice: with the solver on
// the companion map (x0, x1, t) -> (x0, x1, t^2 + x1 t + x0), and with shift_root.

#include <iostream>

#include "qift/qift.hpp"

int main() {
  using namespace qift;
  const PadicField f5(5, 32);

  const auto phi = PolyMap<PadicField>::from_rational(f5, companion_map(2));
  const Vector<PadicField> P{f5.from_int(-1), f5.zero(), f5.one()};
  const Vector<PadicField> q{f5.from_int(-26), f5.zero(), f5.zero()};
  const auto bundle = certify_nonarch(phi, Box{1.0, 1.0});
  const auto out = solve(phi, P, q, bundle);
  std::cout << "companion map: " << to_string(out.status) << " after " << out.iterations << " steps\n";
  if (!out.solved()) return 1;
  const Padic t = (*out.Q)[2];
  std::cout << "  t    = " << t.to_digits(10) << "\n";

  const auto f = parse_unipoly(f5, "t^2 - 1");
  const auto g = parse_unipoly(f5, "t^2 - 26");
  const auto shifted = shift_root(f, g, f5.one());
  std::cout << "shift_root:    beta = " << shifted.beta.to_digits(10) << "\n";
  std::cout << "  |alpha - beta| |f'(alpha)| = " << shifted.bound_lhs << " <= " << shifted.bound_rhs << "\n";
  std::cout << "  Krasner margin = " << *shifted.krasner_margin << "\n";
  const bool same = (shifted.beta - t).is_zero();
  std::cout << (same ? "the two roots agree" : "the two roots differ") << "\n";
  return same ? 0 : 1;
}
