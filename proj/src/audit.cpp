#include "rsgd/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

// Collects the worst instance of one check within a round.
class Worst {
 public:
  Worst(AuditCheck check, const RoundTrace& trace, const AuditContext& ctx) {
    r_.check = check;
    r_.replication = ctx.replication;
    r_.round = trace.round;
  }

  void add(std::size_t agent, std::size_t step, double lhs, double rhs) {
    ++r_.evaluated;
    const double slack = rhs - lhs;
    if (slack < -kAuditTolerance || std::isnan(slack)) ++r_.failures;
    if (r_.evaluated == 1 || slack < best_ || std::isnan(slack)) {
      best_ = std::isnan(slack) ? -std::numeric_limits<double>::infinity() : slack;
      r_.agent = agent;
      r_.step = step;
      r_.lhs = lhs;
      r_.rhs = rhs;
    }
  }

  bool empty() const { return r_.evaluated == 0; }
  const AuditResidual& result() const { return r_; }

 private:
  AuditResidual r_;
  double best_ = 0.0;
};

bool small_step_precondition(const RoundTrace& trace, const AuditContext& ctx) {
  return trace.alpha <= 1.0 / (2.0 * ctx.curvature.lipschitz * static_cast<double>(ctx.t_local));
}

}  // namespace

std::string to_string(AuditCheck check) {
  switch (check) {
    case AuditCheck::TrackerStep:
      return "tracker_step";
    case AuditCheck::LocalDrift:
      return "local_drift";
    case AuditCheck::TrackerSum:
      return "tracker_sum";
    case AuditCheck::ServerStep:
      return "server_step";
    case AuditCheck::CorrectionNorm:
      return "correction_norm";
  }
  return "unknown";
}

AuditStatus audit_status(AuditCheck check, const AuditContext& ctx) {
  AuditStatus s{check, true, "pathwise", 0, 0};
  if (check == AuditCheck::LocalDrift || check == AuditCheck::CorrectionNorm) return s;
  if (!ctx.noise_free) {
    s.enabled = false;
    s.note = "skipped: only an expectation bound under gradient noise";
    return s;
  }
  s.note = check == AuditCheck::TrackerStep ? "pathwise (noise-free)"
                                            : "pathwise (noise-free, needs alpha_k <= 1/(2LT))";
  return s;
}

std::vector<AuditResidual> audit_round(const RoundTrace& trace, const AuditContext& ctx) {
  if (trace.local.size() != trace.honest_agents.size() || trace.local.empty()) {
    throw ConfigError("audit requires local traces for every honest agent (round " +
                      std::to_string(trace.round) + ")");
  }
  const double L = ctx.curvature.lipschitz;
  const double mu = ctx.curvature.mu;
  const double a = trace.alpha;
  const double b = trace.beta;
  const double T = static_cast<double>(ctx.t_local);
  const double H = static_cast<double>(ctx.n_honest);
  const double f = static_cast<double>(ctx.n_byzantine);
  const double sigma_sq = ctx.sigma_sq;
  const double D = trace.opt_distance_sq;
  const double W = trace.tracker_error;

  std::vector<AuditResidual> out;
  auto enabled = [&](AuditCheck c) { return audit_status(c, ctx).enabled; };

  Worst tracker_step(AuditCheck::TrackerStep, trace, ctx);
  Worst local_drift(AuditCheck::LocalDrift, trace, ctx);
  double sum_sq_errors = 0.0;  // sum_i sum_{t<T} |e_t|^2
  double sum_errors = 0.0;     // sum_i sum_{t<T} |e_t|

  for (std::size_t i = 0; i < trace.local.size(); ++i) {
    const LocalTrace& lt = trace.local[i];
    const std::size_t agent = trace.honest_agents[i];
    if (lt.x.size() != ctx.t_local + 1 || lt.e.size() != ctx.t_local + 1) {
      throw ConfigError("local trace has wrong length for agent " + std::to_string(agent));
    }
    double prefix = 0.0;  // sum_{l<t} |e_l|^2
    for (std::size_t t = 0; t < ctx.t_local; ++t) {
      const double e_sq = lt.e[t].squaredNorm();
      const double drift_sq = (lt.x[t] - trace.x_bar).squaredNorm();
      tracker_step.add(agent, t, lt.e[t + 1].squaredNorm(),
                       (1.0 - a) * e_sq + a * L * L * drift_sq + a * a * sigma_sq);
      prefix += e_sq;
      sum_sq_errors += e_sq;
      sum_errors += std::sqrt(e_sq);
      const double tt = static_cast<double>(t + 1);
      local_drift.add(agent, t + 1, (lt.x[t + 1] - trace.x_bar).squaredNorm(),
                      2.0 * L * L * tt * tt * b * b * D + 2.0 * tt * b * b * prefix);
    }
  }

  if (enabled(AuditCheck::TrackerStep)) out.push_back(tracker_step.result());
  out.push_back(local_drift.result());

  if (enabled(AuditCheck::TrackerSum) && small_step_precondition(trace, ctx)) {
    Worst w(AuditCheck::TrackerSum, trace, ctx);
    w.add(0, 0, sum_sq_errors / H,
          2.0 * T * W + 2.0 * T * sigma_sq * a + 4.0 * std::pow(L, 4) * T * T * T * b * b * D);
    out.push_back(w.result());
  }
  if (enabled(AuditCheck::ServerStep) && small_step_precondition(trace, ctx)) {
    Worst w(AuditCheck::ServerStep, trace, ctx);
    w.add(0, 0, (trace.x_bar_next - trace.x_bar).squaredNorm(),
          100.0 * L * L * T * T * b * b * D + 40.0 * b * b * T * T * W +
              32.0 * T * T * sigma_sq * a * b * b + 32.0 * T * T * sigma_sq * f * a * a * b * b / H);
    out.push_back(w.result());
  }
  {
    Worst w(AuditCheck::CorrectionNorm, trace, ctx);
    const double B = static_cast<double>(trace.byz_survivors);
    w.add(0, 0, trace.correction.norm(),
          2.0 * L * T * b * B * trace.honest_grad_norm / (mu * H) + 2.0 * b * sum_errors / H);
    out.push_back(w.result());
  }
  return out;
}

std::vector<AuditResidual> AuditReport::failures() const {
  std::vector<AuditResidual> out;
  for (const auto& r : residuals) {
    if (r.failures > 0) out.push_back(r);
  }
  return out;
}

AuditReport lemma_audit(std::span<const RoundTrace> traces, const AuditContext& ctx) {
  AuditReport report;
  for (auto c : kAllAuditChecks) report.status.push_back(audit_status(c, ctx));
  for (const auto& trace : traces) {
    auto rows = audit_round(trace, ctx);
    for (auto& s : report.status) {
      if (!s.enabled) continue;
      const bool present = std::any_of(rows.begin(), rows.end(),
                                       [&](const AuditResidual& r) { return r.check == s.check; });
      (present ? s.rounds_audited : s.rounds_skipped) += 1;
    }
    report.residuals.insert(report.residuals.end(), rows.begin(), rows.end());
  }
  return report;
}

}  // namespace rsgd
