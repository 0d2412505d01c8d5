#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsgd/errors.hpp"
#include "rsgd/objectives.hpp"
#include "suites.hpp"

using namespace rsgd;

TEST(Objectives, FiniteDifferenceAgreement) {
  for (auto kind : {ObjectiveKind::ScQuadratic, ObjectiveKind::PlSine}) {
    auto v = suites::finite_difference(kind, 100, 11);
    EXPECT_TRUE(v.pass) << v.detail;
  }
}

TEST(Objectives, GradientIsZeroAtCenter) {
  Point c = Point::LinSpaced(4, -1.0, 2.0);
  EXPECT_EQ(sample_gradient(ObjectiveKind::PlSine, c, c).norm(), 0.0);
  EXPECT_EQ(sample_gradient(ObjectiveKind::ScQuadratic, c, c).norm(), 0.0);
}

TEST(Objectives, PlSineSmallRadiusUsesLimitFactor) {
  Point c = Point::Zero(3);
  Point x = Point::Zero(3);
  x(1) = 1e-10;
  // 1 + sin(2r)/(2r) -> 2 as r -> 0
  EXPECT_DOUBLE_EQ(sample_gradient(ObjectiveKind::PlSine, x, c)(1), 2e-10);
}

TEST(Objectives, KnownValues) {
  Point c = Point::Zero(2);
  Point x(2);
  x << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(sample_value(ObjectiveKind::ScQuadratic, x, c), 12.5);
  EXPECT_NEAR(sample_value(ObjectiveKind::PlSine, x, c),
              12.5 + 0.5 * std::sin(5.0) * std::sin(5.0), 1e-14);
  // grad = (1 + sin(10)/10) x for r = 5
  const double factor = 1.0 + std::sin(10.0) / 10.0;
  EXPECT_NEAR(sample_gradient(ObjectiveKind::PlSine, x, c)(0), 3.0 * factor, 1e-14);
}

TEST(Objectives, PlInequalityGrid) {
  auto v = suites::pl_grid(12);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Objectives, CertifiedPlConstantIsTight) {
  const double mu = certified_pl_constant();
  EXPECT_DOUBLE_EQ(mu, 0.537);
  // Rounding to three digits must not give away more than 0.001.
  double min_ratio = 1e300;
  for (int i = 1; i <= 20000; ++i) min_ratio = std::min(min_ratio, oracle::pl_ratio(1e-3 * i));
  EXPECT_GE(min_ratio, mu);
  EXPECT_LT(min_ratio, mu + 1e-3);
}

TEST(Objectives, LipschitzGradients) {
  for (auto kind : {ObjectiveKind::ScQuadratic, ObjectiveKind::PlSine}) {
    auto v = suites::lipschitz(kind, 13);
    EXPECT_TRUE(v.pass) << v.detail;
  }
}

TEST(Objectives, UnbiasedQuadraticGradients) {
  auto v = suites::unbiasedness(ObjectiveKind::ScQuadratic, 20000, 14);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Objectives, PlSineMeanZeroAtMinimizer) {
  auto v = suites::unbiasedness(ObjectiveKind::PlSine, 20000, 15);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Objectives, VarianceBound) {
  for (auto kind : {ObjectiveKind::ScQuadratic, ObjectiveKind::PlSine}) {
    auto v = suites::variance_bound(kind, 20000, 16);
    EXPECT_TRUE(v.pass) << v.detail;
  }
}

TEST(Objectives, CurvatureConstants) {
  const auto sc = curvature(ObjectiveKind::ScQuadratic, 2.0, 5);
  EXPECT_EQ(sc.mu, 1.0);
  EXPECT_EQ(sc.lipschitz, 1.0);
  EXPECT_DOUBLE_EQ(sc.sigma_sq, 20.0);
  const auto pl = curvature(ObjectiveKind::PlSine, 1.0, 10);
  EXPECT_EQ(pl.lipschitz, 2.0);
  EXPECT_EQ(pl.mu, 0.537);
  // Cached and reproducible.
  EXPECT_EQ(curvature(ObjectiveKind::PlSine, 1.0, 10).sigma_sq, pl.sigma_sq);
  EXPECT_EQ(estimate_pl_sine_sigma_sq(1.0, 10), pl.sigma_sq);
}

TEST(Objectives, FiniteSampleDrawsFromFrozenSet) {
  RandomStream rng(3, {0});
  Point center = Point::Constant(3, 1.0);
  auto data = AgentData::finite_sample(center, 1.0, 7, rng);
  ASSERT_EQ(data.samples().size(), 7u);
  std::vector<int> hits(7, 0);
  Point s(3);
  for (int i = 0; i < 7000; ++i) {
    data.draw_sample(rng, s);
    int found = -1;
    for (int j = 0; j < 7; ++j) {
      if (data.samples()[j] == s) found = j;
    }
    ASSERT_GE(found, 0);
    ++hits[found];
  }
  // Each index should be chosen about 1000 times.
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(Objectives, NoiselessPopulationReturnsCenter) {
  RandomStream rng(3, {0});
  Point center = Point::Constant(3, 2.0);
  auto data = AgentData::population(center, 0.0);
  Point s(3);
  data.draw_sample(rng, s);
  EXPECT_EQ(s, center);
  // The stream was not advanced.
  RandomStream fresh(3, {0});
  EXPECT_EQ(rng.gaussian(), fresh.gaussian());
}

TEST(Objectives, KindNamesRoundTrip) {
  for (auto kind : {ObjectiveKind::ScQuadratic, ObjectiveKind::PlSine}) {
    EXPECT_EQ(objective_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(objective_kind_from_string("quartic"), ConfigError);
}
