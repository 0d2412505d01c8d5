#include "rsgd/output.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

void log_violations(const RegimeReport& report, std::ostream& log) {
  for (const auto& v : report.violations()) {
    log << "warning: " << report.regime << " condition violated: " << v.name << " ("
        << format_double(v.lhs) << " vs " << format_double(v.rhs) << ")\n";
  }
}

}  // namespace

std::string summary_csv(const ExperimentSummary& summary) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : summary.rows) {
    out += std::to_string(r.k);
    for (double v : {r.alpha, r.beta, r.opt_error.mean, r.opt_error.std, r.W.mean, r.W.std,
                     r.V.mean, r.V.std, r.bound, r.contraction, r.byz_survivors_mean}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string rate_fit_text(const ExperimentSummary& summary, const SimulationConfig& config) {
  std::ostringstream out;
  out << "quantity = V_mean\n";
  out << "regime = " << to_string(config.regime) << "\n";
  out << "n_byzantine = " << config.n_byzantine << "\n";
  if (summary.rate_fit) {
    const auto& fit = *summary.rate_fit;
    out << "slope = " << format_double(fit.slope) << "\n";
    out << "intercept = " << format_double(fit.intercept) << "\n";
    out << "window = [" << fit.first_k << ", " << fit.last_k << "]\n";
    out << "points = " << fit.points << "\n";
  } else {
    out << "slope = none\n";
    out << "reason = need at least " << kMinRoundsForFit
        << " rounds and two positive values in the window\n";
  }
  out << "bound_dominated = " << (summary.bound_dominated ? "true" : "false") << "\n";
  out << "bound_status = " << (summary.bound_is_hard ? "hard" : "advisory") << "\n";
  return out.str();
}

nlohmann::json report_json(const RegimeReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs},
                      {"relation", c.relation},
                      {"rhs", c.rhs},
                      {"holds", c.holds}});
  }
  return {{"regime", report.regime}, {"satisfied", report.satisfied()}, {"checks", checks}};
}

nlohmann::json manifest_json(const SimulationConfig& config, const ExperimentResult& result,
                             const std::map<std::string, std::string>& outputs) {
  nlohmann::json j;
  j["tool"] = "rsgd_sim";
  j["tool_version"] = kToolVersion;
  j["master_seed"] = config.master_seed;
  j["config"] = entries_from_config(config);
  j["curvature"] = {{"mu", result.curvature.mu},
                    {"lipschitz", result.curvature.lipschitz},
                    {"sigma_sq", result.curvature.sigma_sq}};
  if (config.objective == ObjectiveKind::PlSine) {
    j["curvature"]["sigma_sq_estimate_seed"] = kSigmaEstimateSeed;
  }
  j["reports"] = {{"basic", report_json(result.basic_report)},
                  {"theorem", report_json(result.theorem_report)},
                  {"filter", report_json(result.filter_report)}};
  j["bound"] = {{"v0", result.summary.v0},
                {"dominated", result.summary.bound_dominated},
                {"status", result.summary.bound_is_hard ? "hard" : "advisory"}};
  j["outputs"] = outputs;
  return j;
}

SimulationConfig config_from_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("config") || !j["config"].is_object()) {
    throw ConfigError("manifest '" + path.string() + "' has no config object");
  }
  ConfigEntries entries;
  for (const auto& [key, value] : j["config"].items()) {
    if (!value.is_string()) throw ConfigError("manifest config key '" + key + "' is not a string");
    entries[key] = value.get<std::string>();
  }
  return config_from_entries(entries);
}

std::string output_tag(const SimulationConfig& config) {
  return "f" + std::to_string(config.n_byzantine);
}

int run(const SimulationConfig& config, const RunOptions& options, std::ostream& log) {
  const std::string tag = output_tag(config);
  try {
    ensure_dir(options.out_dir);
    ExperimentResult result = run_experiment(config, options.workers);
    log_violations(result.theorem_report, log);
    log_violations(result.filter_report, log);

    const std::map<std::string, std::string> outputs = {
        {"summary", "summary_" + tag + ".csv"},
        {"manifest", "manifest_" + tag + ".json"},
        {"rate_fit", "rate_fit_" + tag + ".txt"}};
    write_file(options.out_dir / outputs.at("summary"), summary_csv(result.summary));
    write_file(options.out_dir / outputs.at("rate_fit"), rate_fit_text(result.summary, config));
    write_file(options.out_dir / outputs.at("manifest"),
               manifest_json(config, result, outputs).dump(2) + "\n");

    if (result.summary.bound_is_hard && !result.summary.bound_dominated) {
      log << "error: mean V exceeds the theoretical bound under theorem-valid parameters\n";
      return kExitValidation;
    }
    if (options.strict &&
        !(result.theorem_report.satisfied() && result.filter_report.satisfied())) {
      log << "error: strict mode and theorem conditions do not hold\n";
      return kExitValidation;
    }
    return kExitOk;
  } catch (const DivergenceError& e) {
    log << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int audit_command(SimulationConfig config, const RunOptions& options, std::ostream& log,
                  const AuditHooks& hooks) {
  config.data_model.mode = Population{};
  config.audit = true;
  const std::string tag = output_tag(config);
  try {
    config.validate();
    ensure_dir(options.out_dir);
    const AuditContext ctx = World(config, 0).audit_context();
    ExperimentResult result = run_experiment(config, options.workers);

    std::map<AuditCheck, std::vector<AuditResidual>> by_check;
    for (const auto& traj : result.trajectories) {
      for (AuditResidual r : traj.audit) {
        if (hooks.tamper) hooks.tamper(r);
        if (r.slack() < -kAuditTolerance && r.failures == 0) r.failures = 1;
        by_check[r.check].push_back(r);
      }
    }

    std::ostringstream summary;
    std::size_t total_failures = 0;
    const std::size_t total_rounds = config.n_rounds * config.replications;
    for (AuditCheck check : kAllAuditChecks) {
      const AuditStatus status = audit_status(check, ctx);
      const auto& rows = by_check[check];
      std::string csv = "replication,k,agent,step,lhs,rhs,slack,evaluated,failures\n";
      double min_slack = std::numeric_limits<double>::infinity();
      std::size_t failures = 0;
      for (const auto& r : rows) {
        csv += std::to_string(r.replication) + ',' + std::to_string(r.round) + ',' +
               std::to_string(r.agent) + ',' + std::to_string(r.step) + ',' +
               format_double(r.lhs) + ',' + format_double(r.rhs) + ',' +
               format_double(r.slack()) + ',' + std::to_string(r.evaluated) + ',' +
               std::to_string(r.failures) + '\n';
        min_slack = std::min(min_slack, r.slack());
        failures += r.slack() < -kAuditTolerance ? std::max<std::size_t>(r.failures, 1) : 0;
      }
      total_failures += failures;
      write_file(options.out_dir / ("audit_" + to_string(check) + "_" + tag + ".csv"), csv);
      summary << to_string(check) << ": " << (status.enabled ? "enabled" : "disabled") << " ("
              << status.note << "), rounds audited " << rows.size() << " of " << total_rounds
              << ", min slack "
              << (rows.empty() ? std::string("n/a") : format_double(min_slack))
              << ", failures " << failures << "\n";
    }
    summary << "result: " << (total_failures == 0 ? "pass" : "fail") << "\n";
    write_file(options.out_dir / ("audit_summary_" + tag + ".txt"), summary.str());
    log << summary.str();
    return total_failures == 0 ? kExitOk : kExitValidation;
  } catch (const DivergenceError& e) {
    log << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace rsgd
