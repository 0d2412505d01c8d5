// rsgd_sim: run experiments and lemma audits from a config file, a preset
// or a previous manifest.

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rsgd/config.hpp"
#include "rsgd/errors.hpp"
#include "rsgd/output.hpp"

namespace {

struct Source {
  std::string config_path;
  std::string preset;
  std::string manifest_path;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::vector<std::size_t> f_values;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> replications;
  bool audit = false;
};

rsgd::ConfigEntries base_entries(const Source& src) {
  const int given = !src.config_path.empty() + !src.preset.empty() + !src.manifest_path.empty();
  if (given != 1) {
    throw rsgd::ConfigError("give exactly one of --config, --preset, --manifest");
  }
  if (!src.config_path.empty()) return rsgd::read_config_file(src.config_path);
  if (!src.preset.empty()) return rsgd::preset_entries(src.preset);
  return rsgd::entries_from_config(rsgd::config_from_manifest(src.manifest_path));
}

// Flags win over file values; the merged entries are what the manifest records.
std::vector<rsgd::SimulationConfig> resolve(const Source& src, const Overrides& ov) {
  rsgd::ConfigEntries entries = base_entries(src);
  if (ov.seed) entries["master_seed"] = std::to_string(*ov.seed);
  if (ov.rounds) entries["n_rounds"] = std::to_string(*ov.rounds);
  if (ov.replications) entries["replications"] = std::to_string(*ov.replications);
  if (ov.audit) entries["audit"] = "true";
  if (ov.mode) {
    entries["objective"] = *ov.mode == "sc" ? "sc_quadratic" : "pl_sine";
    entries["regime"] = *ov.mode;
  }
  std::vector<rsgd::SimulationConfig> configs;
  if (ov.f_values.empty()) {
    configs.push_back(rsgd::config_from_entries(entries));
  } else {
    for (std::size_t f : ov.f_values) {
      entries["n_byzantine"] = std::to_string(f);
      configs.push_back(rsgd::config_from_entries(entries));
    }
  }
  return configs;
}

void add_common(CLI::App* cmd, Source& src, Overrides& ov, rsgd::RunOptions& opts) {
  cmd->add_option("--config", src.config_path, "key=value config file");
  cmd->add_option("--preset", src.preset, "named preset")
      ->check(CLI::IsMember(rsgd::preset_names()));
  cmd->add_option("--manifest", src.manifest_path, "replay the config stored in a manifest");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--mode", ov.mode, "objective and regime")->check(CLI::IsMember({"sc", "pl"}));
  cmd->add_option("--f", ov.f_values, "number of Byzantine agents; repeat for several runs");
  cmd->add_option("--rounds", ov.rounds, "global rounds K");
  cmd->add_option("--replications", ov.replications, "Monte Carlo replications");
  cmd->add_option("--workers", opts.workers, "worker threads")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine-resilient two-time-scale local SGD simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsgd::kToolVersion);

  Source src;
  Overrides ov;
  rsgd::RunOptions opts;
  opts.workers = std::max(1u, std::thread::hardware_concurrency());

  auto* run_cmd = app.add_subcommand("run", "run an experiment and write CSV + manifest");
  add_common(run_cmd, src, ov, opts);
  run_cmd->add_flag("--strict", opts.strict, "fail when theorem conditions are violated");
  run_cmd->add_flag("--audit", ov.audit, "record audit residuals during the run");

  auto* audit_cmd = app.add_subcommand("audit", "pathwise audit of the per-round inequalities");
  add_common(audit_cmd, src, ov, opts);

  auto* presets_cmd = app.add_subcommand("presets", "list presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rsgd::kExitValidation;
  }

  if (presets_cmd->parsed()) {
    for (const auto& name : rsgd::preset_names()) std::cout << name << "\n";
    return rsgd::kExitOk;
  }

  std::vector<rsgd::SimulationConfig> configs;
  try {
    configs = resolve(src, ov);
  } catch (const rsgd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rsgd::kExitValidation;
  }

  int status = rsgd::kExitOk;
  for (const auto& config : configs) {
    const int code = audit_cmd->parsed() ? rsgd::audit_command(config, opts, std::cerr)
                                         : rsgd::run(config, opts, std::cerr);
    if (code != rsgd::kExitOk && status == rsgd::kExitOk) status = code;
    if (code == rsgd::kExitIo) break;
  }
  return status;
}
