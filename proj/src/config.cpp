#include "rsgd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

bool known_key(const std::string& key) {
  const auto& req = required_config_keys();
  return std::find(req.begin(), req.end(), key) != req.end() ||
         optional_config_defaults().count(key) > 0;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': expected an unsigned 64-bit integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError("key '" + key + "': expected a finite real number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

}  // namespace

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = {
      "n_agents", "n_byzantine", "dim",   "t_local", "n_rounds", "replications", "master_seed",
      "objective", "data_mode",  "noise_std", "attack", "c_alpha", "c_beta",     "h"};
  return keys;
}

const ConfigEntries& optional_config_defaults() {
  static const ConfigEntries defaults = {
      {"regime", ""},  // follows the objective: sc_quadratic -> sc, pl_sine -> pl
      {"samples_per_agent", "100"},
      {"attack_factor", "2"},
      {"attack_scale", "10"},
      {"tracker_init", "zero"},
      {"x0_distance", "10"},
      {"audit", "false"},
      {"fixed_alpha", ""},
  };
  return defaults;
}

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key before '='");
    if (!known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": key '" + key + "' has no value");
    if (!entries.emplace(key, value).second) {
      throw ConfigError(where + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> preset_names() {
  return {"sc-fig1", "pl-fig2", "audit-tiny", "audit-lemma", "theory-sc"};
}

ConfigEntries preset_entries(const std::string& name) {
  // Network size, dimension, local steps, sample count, noise and attack
  // follow the reference experiment setup. Schedule constants, K, replications
  // and the seed are project defaults.
  static const char* kFigureCommon =
      "n_agents = 50\n"
      "n_byzantine = 8\n"
      "dim = 10\n"
      "t_local = 3\n"
      "n_rounds = 2000\n"
      "replications = 10\n"
      "master_seed = 1\n"
      "data_mode = finite_sample\n"
      "samples_per_agent = 100\n"
      "noise_std = 1\n"
      "attack = shifted_mean\n"
      "attack_factor = 2\n"
      "c_alpha = 2\n"
      "c_beta = 1\n"
      "h = 10\n";
  if (name == "sc-fig1") {
    return parse_config_text(std::string(kFigureCommon) + "objective = sc_quadratic\nregime = sc\n");
  }
  if (name == "pl-fig2") {
    return parse_config_text(std::string(kFigureCommon) + "objective = pl_sine\nregime = pl\n");
  }
  if (name == "audit-tiny") {
    return parse_config_text(
        "n_agents = 3\nn_byzantine = 0\ndim = 4\nt_local = 2\nn_rounds = 5\nreplications = 1\n"
        "master_seed = 1\nobjective = sc_quadratic\ndata_mode = population\nnoise_std = 0\n"
        "attack = shifted_mean\nc_alpha = 1\nc_beta = 0.5\nh = 5\naudit = true\n");
  }
  if (name == "audit-lemma") {
    return parse_config_text(
        "n_agents = 5\nn_byzantine = 1\ndim = 4\nt_local = 3\nn_rounds = 50\nreplications = 10\n"
        "master_seed = 1\nobjective = sc_quadratic\ndata_mode = population\nnoise_std = 0\n"
        "attack = shifted_mean\nc_alpha = 1\nc_beta = 0.5\nh = 5\naudit = true\n");
  }
  if (name == "theory-sc") {
    // Smallest constants that satisfy every strongly convex theorem
    // condition for mu = L = 1, T = 1.
    return parse_config_text(
        "n_agents = 6\nn_byzantine = 1\ndim = 1\nt_local = 1\nn_rounds = 200\nreplications = 50\n"
        "master_seed = 1\nobjective = sc_quadratic\ndata_mode = population\nnoise_std = 1\n"
        "attack = shifted_mean\nc_alpha = 132765696\nc_beta = 72\nh = 8700932653056\n");
  }
  throw ConfigError("unknown preset '" + name + "'");
}

SimulationConfig config_from_entries(const ConfigEntries& entries) {
  std::vector<std::string> missing;
  for (const auto& key : required_config_keys()) {
    if (!entries.count(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }
  for (const auto& [key, value] : entries) {
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> std::string {
    if (auto it = entries.find(key); it != entries.end()) return it->second;
    return optional_config_defaults().at(key);
  };

  SimulationConfig c;
  c.n_agents = parse_count("n_agents", get("n_agents"));
  c.n_byzantine = parse_count("n_byzantine", get("n_byzantine"));
  c.dim = parse_count("dim", get("dim"));
  c.t_local = parse_count("t_local", get("t_local"));
  c.n_rounds = parse_count("n_rounds", get("n_rounds"));
  c.replications = parse_count("replications", get("replications"));
  c.master_seed = parse_u64("master_seed", get("master_seed"));
  c.objective = objective_kind_from_string(get("objective"));

  const std::string mode = get("data_mode");
  if (mode == "finite_sample") {
    c.data_model.mode = FiniteSample{parse_count("samples_per_agent", get("samples_per_agent"))};
  } else if (mode == "population") {
    c.data_model.mode = Population{};
  } else {
    throw ConfigError("key 'data_mode': expected finite_sample or population, got '" + mode + "'");
  }
  c.data_model.noise_std = parse_real("noise_std", get("noise_std"));

  const std::string attack = get("attack");
  if (attack == "shifted_mean") {
    c.attack = ShiftedMean{parse_real("attack_factor", get("attack_factor"))};
  } else if (attack == "sign_flip") {
    c.attack = SignFlip{};
  } else if (attack == "large_noise") {
    c.attack = LargeNoise{parse_real("attack_scale", get("attack_scale"))};
  } else {
    throw ConfigError("key 'attack': expected shifted_mean, sign_flip or large_noise, got '" +
                      attack + "'");
  }

  c.schedule.c_alpha = parse_real("c_alpha", get("c_alpha"));
  c.schedule.c_beta = parse_real("c_beta", get("c_beta"));
  c.schedule.h = parse_real("h", get("h"));

  const std::string regime = get("regime");
  if (regime.empty()) {
    c.regime = c.objective == ObjectiveKind::ScQuadratic ? Regime::SC : Regime::PL;
  } else {
    c.regime = regime_from_string(regime);
  }

  const std::string init = get("tracker_init");
  if (init == "zero") {
    c.tracker_init = TrackerInit::Zero;
  } else if (init == "first_sample") {
    c.tracker_init = TrackerInit::FirstSample;
  } else {
    throw ConfigError("key 'tracker_init': expected zero or first_sample, got '" + init + "'");
  }
  c.x0_distance = parse_real("x0_distance", get("x0_distance"));
  c.audit = parse_bool("audit", get("audit"));
  if (const std::string fa = get("fixed_alpha"); !fa.empty()) {
    c.fixed_alpha = parse_real("fixed_alpha", fa);
  }
  c.validate();
  return c;
}

ConfigEntries entries_from_config(const SimulationConfig& c) {
  ConfigEntries e;
  e["n_agents"] = std::to_string(c.n_agents);
  e["n_byzantine"] = std::to_string(c.n_byzantine);
  e["dim"] = std::to_string(c.dim);
  e["t_local"] = std::to_string(c.t_local);
  e["n_rounds"] = std::to_string(c.n_rounds);
  e["replications"] = std::to_string(c.replications);
  e["master_seed"] = std::to_string(c.master_seed);
  e["objective"] = to_string(c.objective);
  if (const auto* finite = std::get_if<FiniteSample>(&c.data_model.mode)) {
    e["data_mode"] = "finite_sample";
    e["samples_per_agent"] = std::to_string(finite->samples_per_agent);
  } else {
    e["data_mode"] = "population";
  }
  e["noise_std"] = format_double(c.data_model.noise_std);
  e["attack"] = to_string(c.attack);
  if (const auto* s = std::get_if<ShiftedMean>(&c.attack)) e["attack_factor"] = format_double(s->factor);
  if (const auto* n = std::get_if<LargeNoise>(&c.attack)) e["attack_scale"] = format_double(n->scale);
  e["c_alpha"] = format_double(c.schedule.c_alpha);
  e["c_beta"] = format_double(c.schedule.c_beta);
  e["h"] = format_double(c.schedule.h);
  e["regime"] = to_string(c.regime);
  e["tracker_init"] = to_string(c.tracker_init);
  e["x0_distance"] = format_double(c.x0_distance);
  e["audit"] = c.audit ? "true" : "false";
  if (c.fixed_alpha) e["fixed_alpha"] = format_double(*c.fixed_alpha);
  return e;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  return config_from_entries(read_config_file(path));
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("failed to format double");
  return std::string(buf, ptr);
}

}  // namespace rsgd
