#include <gtest/gtest.h>

#include <cmath>

#include "rsgd/errors.hpp"
#include "rsgd/schedule.hpp"

using namespace rsgd;

namespace {
const CurvatureConstants kUnit{1.0, 1.0, 0.0};
}

TEST(Schedule, AlphaExamples) {
  EXPECT_EQ(alpha({1, 1, 0}, 0), 1.0);
  EXPECT_EQ(alpha({1, 1, 0}, 3), 0.25);
  EXPECT_DOUBLE_EQ(alpha({24, 1, 100}, 0), 24.0 / 101.0);
}

TEST(Schedule, BetaExamples) {
  EXPECT_DOUBLE_EQ(beta({100, 72.0 / 3.0, 100}, 0), 24.0 / 101.0);
  EXPECT_DOUBLE_EQ(beta({100, 12.0 / 3.0, 100}, 0), 4.0 / 101.0);
  EXPECT_EQ(beta({4, 4, 0}, 3), 1.0);
}

TEST(Schedule, StrictlyDecreasingAndPositive) {
  const ScheduleParams p{2.0, 1.0, 10.0};
  for (std::size_t k = 0; k < 10000; ++k) {
    EXPECT_GT(alpha(p, k), alpha(p, k + 1));
    EXPECT_GT(beta(p, k), beta(p, k + 1));
    EXPECT_GT(beta(p, k + 1), 0.0);
  }
}

TEST(Schedule, BasicConditions) {
  auto r = validate_basic({1, 2, 5}, kUnit, 3);
  ASSERT_FALSE(r.satisfied());
  EXPECT_EQ(r.violations().front().name, "C_beta <= C_alpha");

  EXPECT_TRUE(validate_basic({24, 24, 100}, kUnit, 3).satisfied());

  r = validate_basic({24, 24, 10}, kUnit, 3);
  ASSERT_NE(r.find("L T beta_0 <= 1"), nullptr);
  EXPECT_FALSE(r.find("L T beta_0 <= 1")->holds);
  EXPECT_DOUBLE_EQ(r.find("L T beta_0 <= 1")->lhs, 72.0 / 11.0);
}

TEST(Schedule, TheoremScRequiredConstants) {
  auto r = validate_theorem_sc({1, 1, 0}, kUnit, 3);
  const auto* cb = r.find("C_beta = 72/(mu T)");
  ASSERT_NE(cb, nullptr);
  EXPECT_EQ(cb->rhs, 24.0);
  const auto* ca = r.find("C_alpha >= 84^4 (L+1)^4/(6 mu^2)");
  ASSERT_NE(ca, nullptr);
  EXPECT_DOUBLE_EQ(ca->rhs, std::pow(84.0, 4) * 16.0 / 6.0);

  r = validate_theorem_sc({1e9, 23.9, 1e15}, kUnit, 3);
  bool named = false;
  for (const auto& v : r.violations()) named |= v.name == "C_beta = 72/(mu T)";
  EXPECT_TRUE(named);
}

TEST(Schedule, TheoremScAcceptsSmallestValidConstants) {
  // T = 1: C_beta = 72, C_alpha = 84^4 * 16 / 6, h = 8^4 * 16 * C_alpha.
  const double ca = std::pow(84.0, 4) * 16.0 / 6.0;
  const ScheduleParams p{ca, 72.0, std::pow(8.0, 4) * 16.0 * ca};
  auto r = validate_theorem_sc(p, kUnit, 1);
  EXPECT_TRUE(r.satisfied());
  for (const auto& v : r.violations()) ADD_FAILURE() << v.name;
}

TEST(Schedule, TheoremPlRequiredConstants) {
  auto r = validate_theorem_pl({1, 1, 0}, kUnit, 3);
  ASSERT_NE(r.find("C_beta = 12/(mu T)"), nullptr);
  EXPECT_EQ(r.find("C_beta = 12/(mu T)")->rhs, 4.0);
  ASSERT_NE(r.find("C_alpha >= 12^5 (L+1)^4 T/mu^3"), nullptr);
  EXPECT_DOUBLE_EQ(r.find("C_alpha >= 12^5 (L+1)^4 T/mu^3")->rhs, std::pow(12.0, 5) * 16 * 3);

  r = validate_theorem_pl({4, 4, 1e12}, kUnit, 3);
  const auto* ratio = r.find("beta_k/alpha_k <= mu^2/(12^4 (L+1)^4 T^2)");
  ASSERT_NE(ratio, nullptr);
  EXPECT_EQ(ratio->lhs, 1.0);
  EXPECT_FALSE(ratio->holds);
}

TEST(Schedule, FilterCondition) {
  auto r = validate_filter_condition(10, 50, kUnit);
  EXPECT_TRUE(r.satisfied());
  EXPECT_DOUBLE_EQ(r.checks.front().lhs, 0.25);
  EXPECT_TRUE(validate_filter_condition(0, 7, kUnit).satisfied());
  EXPECT_FALSE(validate_filter_condition(17, 50, kUnit).satisfied());
  EXPECT_THROW(validate_filter_condition(5, 5, kUnit), ConfigError);
}

TEST(Schedule, ConditionsAtLaterRoundsAreWeaker) {
  const ScheduleParams p{1.0, 0.5, 0.0};
  auto r0 = validate_theorem_at(Regime::SC, p, kUnit, 1, 0);
  auto rk = validate_theorem_at(Regime::SC, p, kUnit, 1, 1000000000);
  EXPECT_FALSE(r0.find("alpha_k <= mu/(8^4 (L+1)^4 T)")->holds);
  EXPECT_TRUE(rk.find("alpha_k <= mu/(8^4 (L+1)^4 T)")->holds);
}

TEST(Schedule, RegimeNames) {
  EXPECT_EQ(regime_from_string("sc"), Regime::SC);
  EXPECT_EQ(regime_from_string("pl"), Regime::PL);
  EXPECT_THROW(regime_from_string("convex"), ConfigError);
}
