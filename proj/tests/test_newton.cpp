#include <gtest/gtest.h>

#include <cmath>

#include "qift/certify.hpp"
#include "qift/newton.hpp"
#include "qift/parse.hpp"

using namespace qift;

namespace {

const RealField R{};

bool congruent(const Padic& a, long b, std::int64_t k) {
  const Padic d = a - Padic::from_int(a.prime(), 64, b);
  return d.is_zero() || d.valuation() >= k;
}

}  // namespace

TEST(Basin, SquaringOverQ5) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  EXPECT_TRUE(basin_test(phi, {f5.from_int(1)}, {f5.from_int(6)}, b));
  EXPECT_FALSE(basin_test(phi, {f5.from_int(1)}, {f5.from_int(2)}, b));
  EXPECT_TRUE(basin_test(phi, {f5.from_int(3)}, {f5.from_int(9)}, b));
}

TEST(Basin, ArchimedeanSquaring) {
  const auto phi = parse_map(R, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  EXPECT_TRUE(basin_test(phi, {1.0}, {1.0201}, b));
  EXPECT_FALSE(basin_test(phi, {1.0}, {3.0}, b));
  EXPECT_FALSE(basin_test(phi, {1.5}, {2.25 + 1e-3}, b));  // outside the inner box
}

TEST(SolveNonarch, SquareRootOfSix) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  const auto out = solve(phi, {f5.from_int(1)}, {f5.from_int(6)}, b);
  ASSERT_EQ(out.status, SolveStatus::Solved) << out.message << out.violation;
  const Padic Q = (*out.Q)[0];
  EXPECT_TRUE(congruent(Q, 16, 2));
  EXPECT_TRUE((Q * Q - f5.from_int(6)).is_zero());
  EXPECT_TRUE(out.satisfied);
  EXPECT_DOUBLE_EQ(out.bound_lhs, 0.2);
  EXPECT_DOUBLE_EQ(out.bound_rhs, 0.2);
  ASSERT_TRUE(out.certified_absprec.has_value());
  EXPECT_GE(*out.certified_absprec, 60);
}

TEST(SolveNonarch, SumAndProduct) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0 + x1 ; x0*x1");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  const auto out = solve(phi, {f5.from_int(2), f5.from_int(3)}, {f5.from_int(5), f5.from_int(31)}, b);
  ASSERT_EQ(out.status, SolveStatus::Solved);
  EXPECT_TRUE(congruent((*out.Q)[0], 2, 2));
  EXPECT_TRUE(congruent((*out.Q)[1], 3, 2));
  EXPECT_TRUE(vec_is_zero(f5, vec_sub<PadicField>(phi.eval(*out.Q), {f5.from_int(5), f5.from_int(31)})));
}

TEST(SolveNonarch, ExactTargetTakesNoSteps) {
  const PadicField f7(7);
  const auto phi = parse_map(f7, "x0^3 + x1 ; x1^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  const Vector<PadicField> P{f7.from_int(2), f7.from_int(3)};
  const auto out = solve(phi, P, phi.eval(P), b);
  ASSERT_EQ(out.status, SolveStatus::Solved);
  EXPECT_EQ(out.iterations, 0);
  EXPECT_EQ(out.bound_lhs, 0.0);
}

TEST(SolveNonarch, OutsideBasin) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  const auto out = solve(phi, {f5.from_int(1)}, {f5.from_int(2)}, b);
  EXPECT_EQ(out.status, SolveStatus::OutsideBasin);
  EXPECT_FALSE(out.Q.has_value());
}

TEST(SolveNonarch, SingularJacobian) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  EXPECT_EQ(solve(phi, {f5.zero()}, {f5.from_int(5)}, b).status, SolveStatus::SingularJacobian);
}

TEST(SolveNonarch, Idempotent) {
  const PadicField f5(5);
  const auto phi = parse_map(f5, "x0^2");
  const auto b = certify_nonarch(phi, Box{1.0, 1.0});
  const auto first = solve(phi, {f5.from_int(1)}, {f5.from_int(6)}, b);
  ASSERT_TRUE(first.solved());
  const auto second = solve(phi, *first.Q, {f5.from_int(6)}, b);
  ASSERT_TRUE(second.solved());
  EXPECT_EQ(second.iterations, 0);
  EXPECT_TRUE(((*second.Q)[0] - (*first.Q)[0]).is_zero());
}

TEST(SolveArch, SquareRoot) {
  const auto phi = parse_map(R, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  const auto out = solve(phi, {1.0}, {1.0201}, b);
  ASSERT_EQ(out.status, SolveStatus::Solved) << out.violation;
  EXPECT_NEAR((*out.Q)[0], 1.01, 1e-14);
  EXPECT_TRUE(out.satisfied);
  EXPECT_NEAR(out.bound_lhs, 0.02, 1e-12);
  EXPECT_LE(out.bound_lhs, out.bound_rhs);
  EXPECT_LE(out.iterations, 6);
}

TEST(SolveArch, ChecksHoldAtEveryStep) {
  const auto phi = parse_map(R, "x0^2 + x1 ; x1^2 + x0");
  const auto b = certify_arch(phi, Box{1.0, 3.0});
  const Vector<RealField> P{0.8, 0.3};
  auto q = phi.eval(P);
  const double j = std::abs(phi.jacobian_det_at(P));
  q[0] += 0.5 * b.eta * j * j;
  const auto out = solve(phi, P, q, b);
  ASSERT_EQ(out.status, SolveStatus::Solved) << out.violation;
  for (const auto& rec : out.trace.records) EXPECT_TRUE(rec.checks.all()) << rec.index;
  EXPECT_EQ(out.trace.schedule.front(), b.eta);
}

TEST(SolveArch, QuadricMapSingularPoint) {
  const auto phi = parse_map(R, "x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  EXPECT_EQ(solve(phi, {1.0, 1.0}, {3.1, 2.0}, b).status, SolveStatus::SingularJacobian);
}

TEST(SolveArch, Idempotent) {
  const auto phi = parse_map(R, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  const auto first = solve(phi, {1.0}, {1.0201}, b);
  ASSERT_TRUE(first.solved());
  const auto second = solve(phi, *first.Q, {1.0201}, b);
  ASSERT_TRUE(second.solved());
  EXPECT_EQ(second.iterations, 0);
  EXPECT_EQ((*second.Q)[0], (*first.Q)[0]);
}

TEST(SolveArch, ComplexField) {
  const ComplexField C;
  const auto phi = parse_map(C, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  const std::complex<double> q{1.0, 0.05};
  const auto out = solve(phi, {std::complex<double>(1.0, 0.0)}, {q}, b);
  ASSERT_TRUE(out.solved());
  EXPECT_NEAR(std::abs((*out.Q)[0] - std::sqrt(q)), 0.0, 1e-14);
}

TEST(SolveArch, QuadricMapWithoutBasinEnforcement) {
  const auto phi = parse_map(R, "x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
  const auto b = certify_arch(phi, Box{1.0, 2.0});
  SolveOptions opts;
  opts.enforce_basin = false;
  const auto out = solve(phi, {1.0, 0.0}, {1.01, 1.001}, b, opts);
  ASSERT_TRUE(out.solved());
  EXPECT_FALSE(out.certified);
  const auto v = phi.eval(*out.Q);
  EXPECT_NEAR(v[0], 1.01, 1e-12);
  EXPECT_NEAR(v[1], 1.001, 1e-12);
}
