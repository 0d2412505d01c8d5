#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "oracles.hpp"
#include "rsgd/errors.hpp"
#include "rsgd/server.hpp"
#include "suites.hpp"

using namespace rsgd;

namespace {

std::vector<Message> at_distances(const std::vector<double>& d) {
  std::vector<Message> m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    m[i].agent = i;
    m[i].point = Point::Zero(2);
    m[i].point(0) = d[i];
  }
  return m;
}

}  // namespace

TEST(Server, FilterExample) {
  auto msgs = at_distances({3.0, 1.0, 2.0, 5.0});
  auto out = ce_filter(msgs, Point::Zero(2), 2);
  EXPECT_EQ(out.survivors, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(out.eliminated, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(out.distances, (std::vector<double>{3.0, 1.0, 2.0, 5.0}));
}

TEST(Server, NoFaultsKeepsEveryone) {
  auto msgs = at_distances({3.0, 1.0, 2.0});
  auto out = ce_filter(msgs, Point::Zero(2), 0);
  EXPECT_EQ(out.survivors.size(), 3u);
  EXPECT_TRUE(out.eliminated.empty());
}

TEST(Server, TiesBrokenByAgentIndex) {
  auto msgs = at_distances({1.0, 2.0, 1.0, 2.0});
  auto out = ce_filter(msgs, Point::Zero(2), 1);
  EXPECT_EQ(out.survivors, (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_EQ(out.eliminated, (std::vector<std::size_t>{3}));
}

TEST(Server, SurvivorCountAtPaperScale) {
  RandomStream rng(5, {0});
  std::vector<Message> msgs(50);
  for (std::size_t a = 0; a < 50; ++a) msgs[a] = {a, suites::gaussian_point(rng, 10)};
  auto out = ce_filter(msgs, Point::Zero(10), 10);
  EXPECT_EQ(out.survivors.size(), 40u);
  std::vector<bool> byz(50, false);
  for (std::size_t a = 0; a < 10; ++a) byz[a] = true;
  label_outcome(out, byz);
  EXPECT_LE(out.byz_survivors, 10u);
  EXPECT_EQ(out.byz_survivors + 10 - out.honest_eliminated, 10u);
}

TEST(Server, MatchesBruteForceOracle) {
  auto v = suites::filter_oracle(2000, 21);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Server, PermutationInvariance) {
  RandomStream rng(6, {0});
  std::vector<Message> msgs(12);
  for (std::size_t a = 0; a < 12; ++a) msgs[a] = {a, suites::gaussian_point(rng, 3)};
  msgs[7].point = msgs[2].point;
  const Point x_bar = Point::Zero(3);
  const auto ref = ce_filter(msgs, x_bar, 4);
  const Point ref_avg = aggregate_survivors(ref, msgs);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(msgs.begin(), msgs.end(), rng.engine());
    const auto out = ce_filter(msgs, x_bar, 4);
    EXPECT_EQ(out.survivors, ref.survivors);
    EXPECT_EQ(out.eliminated, ref.eliminated);
    EXPECT_EQ(aggregate_survivors(out, msgs), ref_avg);
  }
}

TEST(Server, NonFiniteMessagesSortLast) {
  auto msgs = at_distances({1.0, 2.0, 3.0});
  msgs[0].point(1) = std::numeric_limits<double>::quiet_NaN();
  auto out = ce_filter(msgs, Point::Zero(2), 1);
  EXPECT_EQ(out.eliminated, (std::vector<std::size_t>{0}));
  EXPECT_FALSE(out.non_finite_survivor);
  out = ce_filter(msgs, Point::Zero(2), 0);
  EXPECT_TRUE(out.non_finite_survivor);
}

TEST(Server, InputErrors) {
  auto msgs = at_distances({1.0, 2.0});
  EXPECT_THROW(ce_filter(msgs, Point::Zero(2), 2), ConfigError);
  EXPECT_THROW(ce_filter(msgs, Point::Zero(3), 0), DimensionError);
  msgs[1].agent = 0;
  EXPECT_THROW(ce_filter(msgs, Point::Zero(2), 0), ConfigError);
}

TEST(Server, AggregateExamples) {
  Point m(2);
  m << 0.1, -0.7;
  std::vector<Point> one{m};
  EXPECT_EQ(aggregate(one), m);
  std::vector<Point> two{Point::Zero(2), Point::Constant(2, 2.0)};
  EXPECT_EQ(aggregate(two), Point::Constant(2, 1.0));
  EXPECT_THROW(aggregate(std::vector<Point>{}), ConfigError);
}

TEST(Server, AggregateMatchesCompensatedSum) {
  RandomStream rng(8, {0});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts;
    std::vector<oracle::Vec> raw;
    for (int i = 0; i < 40; ++i) {
      pts.push_back(suites::gaussian_point(rng, 5, 1e3));
      raw.push_back(suites::to_vec(pts.back()));
    }
    const Point got = aggregate(pts);
    const auto ref = oracle::compensated_mean(raw);
    for (int j = 0; j < 5; ++j) {
      EXPECT_NEAR(got(j), ref[j], 1e-12 * std::max(1.0, std::abs(ref[j])) * 1e3);
    }
  }
}

TEST(Server, CorrectionTermZeroWithoutFaults) {
  auto msgs = at_distances({1.0, 2.0, 3.0});
  auto out = ce_filter(msgs, Point::Zero(2), 0);
  std::vector<bool> byz(3, false);
  EXPECT_EQ(byzantine_correction_term(out, msgs, byz, Point::Zero(2)).norm(), 0.0);
}

TEST(Server, CorrectionTermCancelsForClones) {
  // Byzantine 0 surviving with exactly the message of eliminated honest 2.
  auto msgs = at_distances({2.0, 1.0, 2.0});
  std::vector<bool> byz{true, false, false};
  auto out = ce_filter(msgs, Point::Zero(2), 1);
  ASSERT_EQ(out.eliminated, (std::vector<std::size_t>{2}));
  label_outcome(out, byz);
  EXPECT_EQ(out.byz_survivors, 1u);
  EXPECT_EQ(byzantine_correction_term(out, msgs, byz, Point::Zero(2)).norm(), 0.0);
}

TEST(Server, CorrectionTermMatchesDirectSum) {
  RandomStream rng(10, {0});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Message> msgs(5);
    for (std::size_t a = 0; a < 5; ++a) msgs[a] = {a, suites::gaussian_point(rng, 3)};
    const Point x_bar = suites::gaussian_point(rng, 3, 0.5);
    std::vector<bool> byz{true, false, false, false, false};
    auto out = ce_filter(msgs, x_bar, 1);
    const std::set<std::size_t> kept(out.survivors.begin(), out.survivors.end());
    oracle::Vec e(3, 0.0);
    for (std::size_t a = 0; a < 5; ++a) {
      double sign = 0.0;
      if (byz[a] && kept.count(a)) sign = 1.0;
      if (!byz[a] && !kept.count(a)) sign = -1.0;
      for (int j = 0; j < 3; ++j) e[j] += sign * (msgs[a].point(j) - x_bar(j));
    }
    const Point got = byzantine_correction_term(out, msgs, byz, x_bar);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(got(j), e[j] / 4.0, 1e-14);
  }
}

TEST(Server, CorrectionTermExplainsAggregate) {
  // With |survivors| = |H| the filtered mean equals the honest mean plus E.
  RandomStream rng(11, {0});
  std::vector<Message> msgs(7);
  for (std::size_t a = 0; a < 7; ++a) msgs[a] = {a, suites::gaussian_point(rng, 4)};
  const Point x_bar = Point::Zero(4);
  std::vector<bool> byz{true, true, false, false, false, false, false};
  auto out = ce_filter(msgs, x_bar, 2);
  Point honest_mean = Point::Zero(4);
  for (std::size_t a = 2; a < 7; ++a) honest_mean += msgs[a].point;
  honest_mean /= 5.0;
  const Point e = byzantine_correction_term(out, msgs, byz, x_bar);
  EXPECT_TRUE(aggregate_survivors(out, msgs).isApprox(honest_mean + e, 1e-13));
}
