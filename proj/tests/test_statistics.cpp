#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rsgd/statistics.hpp"

using namespace rsgd;

TEST(Statistics, MeanStd) {
  std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  auto m = mean_std(v);
  EXPECT_DOUBLE_EQ(m.mean, 5.0);
  EXPECT_DOUBLE_EQ(m.std, std::sqrt(32.0 / 7.0));
  std::vector<double> one{3.25};
  EXPECT_EQ(mean_std(one).mean, 3.25);
  EXPECT_EQ(mean_std(one).std, 0.0);
}

TEST(Statistics, LogLogFitRecoversPowerLaw) {
  std::vector<double> v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 7.0 * std::pow(static_cast<double>(k), -1.5);
  auto fit = fit_loglog(v, 0, 999);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->slope, -1.5, 1e-12);
  EXPECT_NEAR(fit->intercept, std::log(7.0), 1e-10);
  EXPECT_EQ(fit->first_k, 1u);  // k = 0 has no logarithm
  EXPECT_EQ(fit->points, 999u);
}

TEST(Statistics, LogLogFitSkipsNonPositive) {
  std::vector<double> v{0, 1, 0.25, 0, -1, 1.0 / 25.0};
  auto fit = fit_loglog(v, 1, 5);
  ASSERT_TRUE(fit);
  EXPECT_EQ(fit->points, 3u);
  EXPECT_NEAR(fit->slope, -2.0, 1e-12);
  std::vector<double> bad{1, 0, 0};
  EXPECT_FALSE(fit_loglog(bad, 1, 2));
}
