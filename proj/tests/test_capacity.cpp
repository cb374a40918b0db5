#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "coopsec/capacity.hpp"
#include "test_support.hpp"

namespace coopsec {
namespace {

using testing::code_of;
using testing::Gen;

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

TEST(CapacityDestination, UnitSnr) {
  EXPECT_DOUBLE_EQ(capacity_destination(vec2(1, 0), vec2(1, 0), 1.0), 0.5);
}

TEST(CapacityDestination, ZeroWeightsGiveZero) {
  Gen gen(1);
  EXPECT_EQ(capacity_destination(ComplexVector::Zero(4), gen.vector(4), 1.0), 0.0);
}

TEST(CapacityDestination, StageOneAddsDirectSnr) {
  // P1 |h0|^2 = noise  =>  alpha = 2, total 1/2 log2(2 + 1)
  const Stage1Accounting st{true, 1.0};
  EXPECT_NEAR(capacity_destination(vec2(1, 0), vec2(1, 0), 1.0, st, Complex(1, 0)), 0.5 * std::log2(3.0), 1e-15);
  EXPECT_NEAR(0.5 * std::log2(3.0), 0.7925, 5e-5);
}

TEST(CapacityDestination, DimensionMismatch) {
  EXPECT_EQ(code_of([] { (void)capacity_destination(ComplexVector::Ones(2), ComplexVector::Ones(3), 1.0); }),
            Errc::DimensionMismatch);
}

TEST(CapacityEavesdropper, NulledIsZero) {
  EXPECT_EQ(capacity_eavesdropper(vec2(1, 0), vec2(0, 1), 1.0), 0.0);
}

TEST(CapacityEavesdropper, UnitSnr) { EXPECT_DOUBLE_EQ(capacity_eavesdropper(vec2(1, 0), vec2(1, 0), 1.0), 0.5); }

TEST(CapacityEavesdropper, StageOneOnlyTerm) {
  // P1 |g0j|^2 = 3 noise  =>  mu = 4
  const Stage1Accounting st{true, 3.0};
  EXPECT_DOUBLE_EQ(capacity_eavesdropper(vec2(1, 0), vec2(0, 1), 1.0, st, Complex(1, 0)), 1.0);
}

TEST(SecrecyCapacity, Definition) {
  const std::array<double, 2> c{1.0, 2.0};
  EXPECT_EQ(secrecy_capacity(3.0, c), 1.0);
  const std::array<double, 1> big{2.0};
  EXPECT_EQ(secrecy_capacity(1.0, big), 0.0);
  EXPECT_EQ(secrecy_capacity(2.5, std::span<const double>{}), 2.5);
}

TEST(SecrecyCapacity, MonotoneProperties) {
  Gen gen(2);
  for (int i = 0; i < 500; ++i) {
    const double cd = gen.uniform(0, 5);
    std::vector<double> ce{gen.uniform(0, 5), gen.uniform(0, 5), gen.uniform(0, 5)};
    const double base = secrecy_capacity(cd, ce);
    auto more = ce;
    more[static_cast<std::size_t>(i % 3)] += gen.uniform(0, 1);
    EXPECT_LE(secrecy_capacity(cd, more), base);
    EXPECT_GE(secrecy_capacity(cd + gen.uniform(0, 1), ce), base);
  }
  // capacity_destination strictly increasing in |w^H h|^2
  const ComplexVector h = vec2(1, 0);
  double prev = -1.0;
  for (double a = 0.0; a < 10.0; a += 0.5) {
    const double c = capacity_destination(vec2(a, 0), h, 1.0);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(SecrecyCapacity, ScalingUpHelpsWhenPositive) {
  Gen gen(3);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const ComplexVector h = gen.vector(3), g = gen.vector(3), w = gen.vector(3);
    const double cs = testing::secrecy_oracle(w, h, g, 1.0);
    if (cs <= 0.0) continue;
    ++checked;
    const double rho = 1.0 + gen.uniform(0.01, 2.0);
    EXPECT_GT(testing::secrecy_oracle(rho * w, h, g, 1.0), cs);
  }
  EXPECT_GT(checked, 50);
}

TEST(Evaluate, MatchesComponents) {
  Gen gen(4);
  const ComplexVector h = gen.vector(4), w = gen.vector(4);
  const ComplexMatrix g = gen.matrix(4, 3);
  const BeamformerSolution s = evaluate(w, h, g, 0.5);
  EXPECT_NEAR(s.transmit_power, w.squaredNorm(), 1e-14);
  ASSERT_EQ(s.c_eav.size(), 3u);
  EXPECT_NEAR(s.c_eav[1], capacity_eavesdropper(w, g.col(1), 0.5), 1e-15);
  EXPECT_EQ(s.secrecy_capacity, secrecy_capacity(s.c_dest, s.c_eav));
  EXPECT_FALSE(s.secrecy_is_lower_bound);
}

TEST(EvaluateBound, ChargesErrorCovariance) {
  Gen gen(5);
  const ComplexVector h = gen.vector(3), w = gen.vector(3);
  const ComplexMatrix g = gen.matrix(3, 1);
  const ComplexMatrix rd = 0.3 * ComplexMatrix::Identity(3, 3);
  const BeamformerSolution s = evaluate_bound(w, h, g, rd, 1.0);
  const double expect = 0.5 * std::log2(1.0 + std::norm(w.dot(g.col(0))) + 0.3 * w.squaredNorm());
  EXPECT_NEAR(s.c_eav[0], expect, 1e-14);
  EXPECT_TRUE(s.secrecy_is_lower_bound);
  const BeamformerSolution exact = evaluate(w, h, g, 1.0);
  EXPECT_LE(s.secrecy_capacity, exact.secrecy_capacity);
}

TEST(DirectSecrecy, DegradedMainChannelIsZero) {
  const std::array<Complex, 2> g0{Complex(0.1, 0), Complex(0.0, 0.5)};
  for (double p : {1e-6, 1.0, 1e6}) EXPECT_EQ(direct_secrecy(p, Complex(0.4, 0), g0, 1e-3), 0.0);
}

TEST(DirectSecrecy, ZeroPower) {
  const std::array<Complex, 1> g0{Complex(0.1, 0)};
  EXPECT_EQ(direct_secrecy(0.0, Complex(1, 0), g0, 1.0), 0.0);
}

TEST(DirectSecrecy, FullRateWithoutHalfFactor) {
  // |h0|^2 = 3 s2 / P, |g0|^2 = s2 / P  =>  log2(4) - log2(2) = 1
  const double p = 2.0, noise = 0.5;
  const std::array<Complex, 1> g0{Complex(std::sqrt(noise / p), 0)};
  EXPECT_NEAR(direct_secrecy(p, Complex(std::sqrt(3 * noise / p), 0), g0, noise), 1.0, 1e-15);
}

TEST(DirectMinPower, SingleLinkClosedForm) {
  // |h0|^2 = s2 and 1 bit: P = (2 - 1) s2 / |h0|^2 = 1
  const double noise = 1e-9;
  EXPECT_NEAR(direct_min_power(1.0, Complex(std::sqrt(noise), 0), {}, noise), 1.0, 1e-12);
}

TEST(DirectMinPower, EqualGainsInfeasible) {
  const std::array<Complex, 1> g0{Complex(0, 0.2)};
  for (double t : {0.01, 1.0, 3.0})
    EXPECT_EQ(code_of([&] { (void)direct_min_power(t, Complex(0.2, 0), g0, 1.0); }), Errc::Infeasible);
}

TEST(DirectMinPower, HandAlgebraAndBisectionOracle) {
  // |h0|^2 = 4u, |g0|^2 = u, target 1  =>  P = s2 / (2u)
  const double u = 1e-6, noise = 1e-9;
  const std::array<Complex, 1> g0{Complex(std::sqrt(u), 0)};
  const Complex h0(2 * std::sqrt(u), 0);
  const double p = direct_min_power(1.0, h0, g0, noise);
  EXPECT_NEAR(p, noise / (2 * u), 1e-15);

  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (direct_secrecy(mid, h0, g0, noise) >= 1.0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(p, hi, 1e-12);
}

TEST(DirectMinPower, RoundTripProperty) {
  Gen gen(6);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double noise = gen.uniform(0.1, 2.0);
    const Complex h0 = gen.normal();
    std::vector<Complex> g0{0.3 * gen.normal(), 0.3 * gen.normal()};
    const double target = gen.uniform(0.05, 3.0);
    try {
      const double p = direct_min_power(target, h0, g0, noise);
      EXPECT_NEAR(direct_secrecy(p, h0, g0, noise), target, 1e-9);
      ++checked;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Infeasible);
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
}  // namespace coopsec
