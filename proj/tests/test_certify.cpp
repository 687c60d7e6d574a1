#include <gtest/gtest.h>

#include <cmath>

#include "qift/certify.hpp"
#include "qift/parse.hpp"

using namespace qift;

namespace {
const RealField R{};
}

TEST(CertifyArch, SquaringOnUnitToTwoBox) {
  const auto phi = parse_map(R, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0}, 0.5);
  EXPECT_DOUBLE_EQ(b.C_Jbd, 4.0);
  EXPECT_DOUBLE_EQ(b.C_key, 1.0);
  EXPECT_DOUBLE_EQ(b.C_tayJ, 2.0);
  EXPECT_DOUBLE_EQ(b.C_tayf, 1.0);
  EXPECT_GE(b.eta, 0.1);
  EXPECT_TRUE(check_admissible(b).all());
  EXPECT_NEAR(tau_of(1.0, 1.0, 2.0, 0.1), 0.125, 1e-15);
  EXPECT_NEAR(1.0 / (1.0 - tau_of(1.0, 1.0, 2.0, 0.1)), 1.142857142857143, 1e-12);
  EXPECT_DOUBLE_EQ(b.C1_basin, b.eta);
  EXPECT_DOUBLE_EQ(b.C2_lipschitz, b.C_key / (1.0 - b.tau));
}

TEST(CertifyArch, EtaIsMaximalUpToBisection) {
  const auto phi = parse_map(R, "x0^2");
  const auto b = certify_arch(phi, Box{1.0, 2.0}, 0.5);
  EXPECT_FALSE(check_admissible(b.C_Jbd, b.C_key, b.C_tayJ, b.C_tayf, 0.5, b.eta * (1 + 1e-6), b.box).all());
}

TEST(CertifyArch, InvalidBox) {
  const auto phi = parse_map(R, "x0^2");
  for (const auto& box : {Box{2.0, 1.0}, Box{1.0, 1.0}, Box{0.0, 1.0}, Box{-1.0, 2.0}}) {
    try {
      (void)certify_arch(phi, box, 0.5);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidBox);
    }
  }
}

TEST(CertifyArch, IdentityMap) {
  const auto b = certify_arch(parse_map(R, "x0 ; x1"), Box{1.0, 2.0}, 0.5);
  EXPECT_EQ(b.C_tayf, 0.0);
  EXPECT_EQ(b.C_tayJ, 0.0);
  EXPECT_EQ(b.tau, 0.0);
  EXPECT_DOUBLE_EQ(b.C2_lipschitz, b.C_key);
  // Only the box condition binds: 1 + C_Jbd C_key sum c_j <= 2.
  EXPECT_NEAR(c_series(b.eta, 0.5), 0.5, 1e-9);
}

TEST(CertifyArch, NoAdmissibleEtaIsReported) {
  // Growth of the box is impossible when b2 is barely above b1 and C_Jbd is huge.
  const auto phi = parse_map(R, "1000000*x0^5");
  try {
    (void)certify_arch(phi, Box{1.0, 1.0000001}, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoAdmissibleEta);
  }
}

TEST(CertifyNonarch, UnitBundle) {
  const PadicField f5(5);
  const auto b = certify_nonarch(parse_map(f5, "x0 + x1 ; x0*x1"), Box{1.0, 1.0});
  EXPECT_EQ(b.C_Jbd, 1.0);
  EXPECT_EQ(b.C_key, 1.0);
  EXPECT_EQ(b.C_tayJ, 1.0);
  EXPECT_EQ(b.C_tayf, 1.0);
  EXPECT_EQ(b.C1_basin, 1.0);
  EXPECT_EQ(b.C2_lipschitz, 1.0);
  EXPECT_EQ(b.tau, 0.0);
  ASSERT_TRUE(b.log_p_C1.has_value());
  EXPECT_EQ(*b.log_p_C1, 0);
}

TEST(CertifyNonarch, NonIntegralCoefficient) {
  const PadicField f5(5);
  const auto b = certify_nonarch(parse_map(f5, "1/5*x0^2"), Box{1.0, 1.0});
  EXPECT_DOUBLE_EQ(b.C_Jbd, 5.0);
  EXPECT_DOUBLE_EQ(b.C_tayf, 5.0);
  ASSERT_TRUE(b.log_p_C1.has_value());
  EXPECT_EQ(*b.log_p_C1, -1);
}

TEST(CertifyNonarch, ZeroMapHasNoTaylorTerm) {
  const PadicField f3(3);
  const auto b = certify_nonarch(parse_map(f3, "0*x0 ; x1"), Box{1.0, 1.0});
  EXPECT_EQ(b.C_tayf, 0.0);
  EXPECT_EQ(b.C_Jbd, 0.0);
}

TEST(CertifyNonarch, RejectsBadBox) {
  const PadicField f3(3);
  EXPECT_THROW((void)certify_nonarch(parse_map(f3, "x0"), Box{2.0, 1.0}), Error);
  EXPECT_THROW((void)certify_nonarch(parse_map(f3, "x0"), Box{0.0, 1.0}), Error);
}

TEST(CertifyNonarch, LargerBoxScalesBounds) {
  const PadicField f2(2);
  const auto b = certify_nonarch(parse_map(f2, "x0^3"), Box{1.0, 4.0});
  EXPECT_DOUBLE_EQ(b.C_Jbd, 16.0);
  EXPECT_DOUBLE_EQ(b.C_tayf, 4.0);
  EXPECT_FALSE(b.log_p_C1.has_value());
}
