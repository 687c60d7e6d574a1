#include <gtest/gtest.h>

#include "qift/bounds.hpp"
#include "qift/linalg.hpp"
#include "qift/mpoly.hpp"
#include "qift/parse.hpp"
#include "qift/unipoly.hpp"

using namespace qift;

namespace {
const RealField R{};
}

TEST(MPoly, Eval) {
  const auto p = lift(R, parse_poly("x0^2 + x0*x1"));
  EXPECT_DOUBLE_EQ(p.eval({2.0, 3.0}), 10.0);
}

TEST(MPoly, EvalMaps) {
  const auto phi = parse_map(R, "x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
  const auto v = phi.eval({1.0, 0.0});
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 1.0);

  const auto comp = parse_map(R, "x0 ; x1 ; t^2 + x1*t + x0");
  const auto w = comp.eval({-1.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(w[0], -1.0);
  EXPECT_DOUBLE_EQ(w[1], 0.0);
  EXPECT_DOUBLE_EQ(w[2], 0.0);
}

TEST(MPoly, Partials) {
  EXPECT_EQ(parse_poly("x0^2 + x0*x1").partial(0), parse_poly("2*x0 + x1"));
  EXPECT_EQ(parse_poly("t^2 + x1*t + x0", 3).partial(2), parse_poly("2*x2 + x1", 3));
  EXPECT_TRUE(parse_poly("7", 2).partial(1).is_zero());
}

TEST(MPoly, JacobianDeterminants) {
  const auto phi = parse_map("x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
  EXPECT_EQ(phi.jacobian_det(), parse_poly("2*x0^2 - 2*x1^2", 2));

  const auto comp = parse_map("x0 ; x1 ; t^2 + x1*t + x0");
  EXPECT_EQ(comp.jacobian_det(), parse_poly("2*x2 + x1", 3));

  const auto id = parse_map("x0 ; x1 ; x2");
  EXPECT_EQ(id.jacobian_det(), parse_poly("1", 3));
}

TEST(MPoly, AdjugateIdentityHoldsSymbolically) {
  const auto phi = parse_map("x0^2*x2 + x1 ; x1^3 - x0*x2 ; x0 + x1*x2^2");
  const std::size_t n = phi.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      MPoly<RationalField> s(RationalField{}, n);
      for (std::size_t k = 0; k < n; ++k) s += phi.jacobian()[i][k] * phi.adjugate()[k][j];
      EXPECT_EQ(s, i == j ? phi.jacobian_det() : MPoly<RationalField>(RationalField{}, n));
    }
  }
}

TEST(MPoly, CanonicalOrderIsGradedLex) {
  EXPECT_EQ(parse_poly("x1^2 + 1 + x0*x1 + x0^2").to_string(), "x0^2 + x0*x1 + x1^2 + 1");
  EXPECT_EQ(parse_poly("x0^3 - x1").to_string(), "x0^3 - x1");
}

TEST(MPoly, Substitute) {
  const auto p = parse_poly("x0*x1", 2);
  const std::vector<MPoly<RationalField>> img{parse_poly("x0 + x1", 2), parse_poly("x0 - x1", 2)};
  EXPECT_EQ(p.substitute(img), parse_poly("x0^2 - x1^2", 2));
}

TEST(Matrix, Adjugate2x2) {
  const Matrix<RealField> m(R, {{1.0, 2.0}, {3.0, 4.0}});
  const auto a = m.adjugate();
  EXPECT_EQ(a(0, 0), 4.0);
  EXPECT_EQ(a(0, 1), -2.0);
  EXPECT_EQ(a(1, 0), -3.0);
  EXPECT_EQ(a(1, 1), 1.0);
  EXPECT_EQ(m.det(), -2.0);
}

TEST(Matrix, ApplyInverseDiagonal) {
  const auto m = Matrix<RealField>::diagonal(R, {2.0, 3.0});
  const auto x = m.apply_inverse({6.0, 6.0});
  EXPECT_DOUBLE_EQ(x[0], 3.0);
  EXPECT_DOUBLE_EQ(x[1], 2.0);
}

TEST(Matrix, SingularThrows) {
  const Matrix<RealField> m(R, {{1.0, 2.0}, {2.0, 4.0}});
  try {
    (void)m.apply_inverse({1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(Matrix, JacobianDetAtPoint) {
  const auto phi = parse_map(R, "x0^2 + x0*x1 + x1^2 ; x0*x1 + 1");
  EXPECT_DOUBLE_EQ(phi.jacobian_at({1.0, 0.0}).det(), 2.0);
  EXPECT_DOUBLE_EQ(phi.jacobian_det_at({1.0, 0.0}), 2.0);
}

TEST(Matrix, Det4x4) {
  const Matrix<RealField> m(R, {{2, 0, 1, 3}, {1, 1, 0, 2}, {0, 3, 1, 1}, {4, 1, 2, 0}});
  EXPECT_DOUBLE_EQ(m.det(), -32.0);
}

TEST(UniPoly, GaussNorm) {
  const PadicField f5(5), f3(3);
  EXPECT_DOUBLE_EQ(gauss_norm(parse_unipoly(f5, "t^2 + 5*t + 25")), 1.0);
  EXPECT_DOUBLE_EQ(gauss_norm(parse_unipoly(f3, "3*t + 9")), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(gauss_norm(parse_unipoly(R, "t^3")), 1.0);
}

TEST(UniPoly, Multiplicity) {
  EXPECT_EQ(root_multiplicity(parse_unipoly(R, "t^2"), 0.0), 2);
  EXPECT_EQ(root_multiplicity(parse_unipoly(R, "t^2 - 1"), 1.0), 1);
  EXPECT_EQ(root_multiplicity(parse_unipoly(R, "(t-1)^2*(t+2)"), 1.0), 2);
  const PadicField f2(2);
  EXPECT_EQ(root_multiplicity(parse_unipoly(f2, "t^2"), f2.zero()), 2);
  EXPECT_EQ(root_multiplicity(parse_unipoly(f2, "t^2 - 1"), f2.from_int(3)), 0);
}

TEST(UniPoly, Monic) {
  EXPECT_TRUE(parse_unipoly(PadicField(5), "t^2 - 26").is_monic());
  EXPECT_FALSE(parse_unipoly(R, "2*t^2 - 26").is_monic());
}

TEST(Resultant, Univariate) {
  EXPECT_EQ(resultant(parse_unipoly("t^2 - 1"), parse_unipoly("t - 2")), 3);
  EXPECT_EQ(resultant(parse_unipoly("t^2 - 1"), parse_unipoly("t + 1")), 0);
  EXPECT_EQ(resultant(parse_unipoly("t - 5"), parse_unipoly("t - 5")), 0);
  EXPECT_EQ(resultant(parse_unipoly("t - 7"), parse_unipoly("t - 2")), 5);
}

TEST(Resultant, EliminatesVariable) {
  // Res_t(t - x0, t - x1) = x0 - x1
  const auto f = parse_poly("x2 - x0", 3);
  const auto g = parse_poly("x2 - x1", 3);
  EXPECT_EQ(resultant(f, g, 2), parse_poly("x0 - x1", 3));
}

TEST(Bounds, SupBound) {
  EXPECT_DOUBLE_EQ(sup_bound(lift(R, parse_poly("x0^2 + 2*x0*x1")), 2.0), 12.0);
  EXPECT_LE(sup_bound(lift(PadicField(3), parse_poly("x0^2 + 2*x0*x1 - 7")), 1.0), 1.0);
  EXPECT_EQ(sup_bound(MPoly<RealField>(R, 2), 5.0), 0.0);
}

TEST(Bounds, LipschitzAndSecondOrder) {
  const auto p = lift(R, parse_poly("x0^3"));
  EXPECT_DOUBLE_EQ(lipschitz_bound(p, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(second_order_bound(p, 2.0), 6.0);
  // Over Q_2 the derivative 2x of x^2 underestimates |x'^2 - x^2|; the divided form does not.
  const PadicField f2(2);
  const auto sq = lift(f2, parse_poly("x0^2"));
  EXPECT_DOUBLE_EQ(lipschitz_bound(sq, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(second_order_bound(sq, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(second_order_bound(lift(f2, parse_poly("x0 + 3")), 1.0), 0.0);
}
