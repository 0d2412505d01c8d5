#pragma once

// Files written by a run: per-round summary CSV, a JSON manifest that
// replays the run, and a rate-fit text summary. Exit codes follow
// ExitCode.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rsgd/config.hpp"
#include "rsgd/simulator.hpp"

namespace rsgd {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitDivergence = 2, kExitIo = 3 };

/// Frozen summary column order.
inline constexpr const char* kSummaryHeader =
    "k,alpha,beta,opt_error_mean,opt_error_std,W_mean,W_std,V_mean,V_std,bound,contraction,"
    "byz_survivors_mean";

std::string summary_csv(const ExperimentSummary& summary);

std::string rate_fit_text(const ExperimentSummary& summary, const SimulationConfig& config);

nlohmann::json report_json(const RegimeReport& report);

/// Manifest for a finished run. `outputs` maps a role to a file name.
nlohmann::json manifest_json(const SimulationConfig& config, const ExperimentResult& result,
                             const std::map<std::string, std::string>& outputs);

/// Config stored in a manifest written by manifest_json.
SimulationConfig config_from_manifest(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool strict = false;      // theorem or filter violations become exit 1
  std::size_t workers = 1;  // never recorded; output does not depend on it
};

/// File stem suffix for a config: "f<n_byzantine>".
std::string output_tag(const SimulationConfig& config);

/// Runs the experiment and writes summary_<tag>.csv, manifest_<tag>.json
/// and rate_fit_<tag>.txt. Diagnostics go to `log`.
int run(const SimulationConfig& config, const RunOptions& options, std::ostream& log);

struct AuditHooks {
  /// Applied to every residual before it is judged; tests use it to
  /// corrupt one side of an inequality.
  std::function<void(AuditResidual&)> tamper;
};

/// Forces Population data and auditing, runs every replication and writes
/// audit_<check>_<tag>.csv slack tables plus audit_summary_<tag>.txt.
/// Returns kExitValidation if any slack < -kAuditTolerance.
int audit_command(SimulationConfig config, const RunOptions& options, std::ostream& log,
                  const AuditHooks& hooks = {});

}  // namespace rsgd
