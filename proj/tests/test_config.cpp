#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsgd/config.hpp"
#include "rsgd/errors.hpp"

using namespace rsgd;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, PaperPreset) {
  auto c = config_from_entries(preset_entries("sc-fig1"));
  EXPECT_EQ(c.n_agents, 50u);
  EXPECT_EQ(c.n_byzantine, 8u);
  EXPECT_EQ(c.dim, 10u);
  EXPECT_EQ(c.t_local, 3u);
  EXPECT_EQ(c.objective, ObjectiveKind::ScQuadratic);
  ASSERT_TRUE(std::holds_alternative<FiniteSample>(c.data_model.mode));
  EXPECT_EQ(std::get<FiniteSample>(c.data_model.mode).samples_per_agent, 100u);
  ASSERT_TRUE(std::holds_alternative<ShiftedMean>(c.attack));
  EXPECT_EQ(std::get<ShiftedMean>(c.attack).factor, 2.0);

  auto pl = config_from_entries(preset_entries("pl-fig2"));
  EXPECT_EQ(pl.objective, ObjectiveKind::PlSine);
  EXPECT_EQ(pl.regime, Regime::PL);
}

TEST(Config, EveryPresetLoads) {
  for (const auto& name : preset_names()) {
    EXPECT_NO_THROW(config_from_entries(preset_entries(name))) << name;
  }
  EXPECT_THROW(preset_entries("fig3"), ConfigError);
}

TEST(Config, EmptyFileReportsEveryRequiredKey) {
  const std::string msg = error_of([] { config_from_entries(parse_config_text("")); });
  for (const auto& key : required_config_keys()) {
    EXPECT_NE(msg.find(key), std::string::npos) << key;
  }
}

TEST(Config, FaultCountMustBeBelowN) {
  auto e = preset_entries("sc-fig1");
  e["n_byzantine"] = "60";
  EXPECT_NE(error_of([&] { config_from_entries(e); }).find("f < N"), std::string::npos);
  e["n_byzantine"] = "8";
  e["t_local"] = "0";
  EXPECT_NE(error_of([&] { config_from_entries(e); }).find("T >= 1"), std::string::npos);
}

TEST(Config, SyntaxErrorsNameLineAndKey) {
  auto msg = error_of([] { parse_config_text("n_agents = 5\n\n# c\nn_agnets = 4\n"); });
  EXPECT_NE(msg.find("line 4"), std::string::npos);
  EXPECT_NE(msg.find("n_agnets"), std::string::npos);

  msg = error_of([] { parse_config_text("dim = 3\ndim = 4\n"); });
  EXPECT_NE(msg.find("line 2"), std::string::npos);
  EXPECT_NE(msg.find("duplicate"), std::string::npos);

  msg = error_of([] { parse_config_text("just words\n"); });
  EXPECT_NE(msg.find("line 1"), std::string::npos);

  auto e = preset_entries("sc-fig1");
  e["dim"] = "ten";
  msg = error_of([&] { config_from_entries(e); });
  EXPECT_NE(msg.find("dim"), std::string::npos);
  e = preset_entries("sc-fig1");
  e["attack"] = "bribery";
  EXPECT_NE(error_of([&] { config_from_entries(e); }).find("attack"), std::string::npos);
}

TEST(Config, CommentsAndWhitespace) {
  auto e = parse_config_text("  dim=3   # trailing\r\n\t# only comment\nobjective =pl_sine\n");
  EXPECT_EQ(e.at("dim"), "3");
  EXPECT_EQ(e.at("objective"), "pl_sine");
}

TEST(Config, RegimeFollowsObjectiveByDefault) {
  auto e = preset_entries("sc-fig1");
  e.erase("regime");
  e["objective"] = "pl_sine";
  EXPECT_EQ(config_from_entries(e).regime, Regime::PL);
}

TEST(Config, EntriesRoundTrip) {
  auto e = preset_entries("pl-fig2");
  e["noise_std"] = "0.1";
  e["fixed_alpha"] = "0.3333333333333333";
  e["x0_distance"] = "2.5e-3";
  auto c = config_from_entries(e);
  auto again = config_from_entries(entries_from_config(c));
  EXPECT_EQ(entries_from_config(again), entries_from_config(c));
  EXPECT_EQ(again.data_model.noise_std, 0.1);
  EXPECT_EQ(*again.fixed_alpha, 0.3333333333333333);
  EXPECT_EQ(again.x0_distance, 2.5e-3);
}

TEST(Config, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(100.0), "100");
  EXPECT_EQ(format_double(1e-20), "1e-20");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  for (double v : {M_PI, 1e300, -2.5e-7, 123456.789}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "rsgd_config_test.cfg";
  {
    std::ofstream out(path);
    for (const auto& [k, v] : preset_entries("audit-tiny")) out << k << " = " << v << "\n";
  }
  auto c = load_config(path);
  EXPECT_EQ(c.n_agents, 3u);
  EXPECT_TRUE(c.audit);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}
