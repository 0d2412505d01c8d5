#pragma once

// Pathwise re-evaluation of the per-round inequalities behind the
// convergence analysis. Each check records both sides and the slack
// rhs - lhs; a slack below -kAuditTolerance is a failure.
//
// Checks (|H| honest agents, D = |x_bar - x*|^2, W the round-start tracker
// error, e_t = y_t - grad q_H(x_bar), sigma^2 the gradient noise variance):
//
//   tracker_step     |e_{t+1}|^2 <= (1-a)|e_t|^2 + a L^2 |x_t - x_bar|^2 + a^2 sigma^2
//   local_drift      |x_t - x_bar|^2 <= 2 L^2 t^2 b^2 D + 2 t b^2 sum_{l<t} |e_l|^2, t = 1..T
//   tracker_sum      (1/|H|) sum_i sum_{t<T} |e_t|^2 <= 2T W + 2T sigma^2 a + 4 L^4 T^3 b^2 D
//   server_step      |x_bar' - x_bar|^2 <= 100 L^2 T^2 b^2 D + 40 b^2 T^2 W
//                                         + 32 T^2 sigma^2 a b^2 + 32 T^2 sigma^2 f a^2 b^2/|H|
//   correction_norm  |E| <= 2 L T b |B| |grad q_H(x_bar)| / (mu |H|)
//                           + 2 b (1/|H|) sum_i sum_{t<T} |e_t|
//
// local_drift and correction_norm hold along every path. The other three
// are expectations that collapse to pathwise statements only without
// gradient noise; tracker_sum and server_step additionally need
// a <= 1/(2 L T).

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rsgd/agents.hpp"
#include "rsgd/objectives.hpp"

namespace rsgd {

enum class AuditCheck { TrackerStep, LocalDrift, TrackerSum, ServerStep, CorrectionNorm };

inline constexpr std::array<AuditCheck, 5> kAllAuditChecks = {
    AuditCheck::TrackerStep, AuditCheck::LocalDrift, AuditCheck::TrackerSum,
    AuditCheck::ServerStep, AuditCheck::CorrectionNorm};

inline constexpr double kAuditTolerance = 1e-9;

std::string to_string(AuditCheck check);

/// Worst (smallest-slack) instance of one check within one round.
struct AuditResidual {
  AuditCheck check = AuditCheck::LocalDrift;
  std::size_t replication = 0;
  std::size_t round = 0;
  std::size_t agent = 0;
  std::size_t step = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t evaluated = 0;  // instances evaluated in this round
  std::size_t failures = 0;   // instances with slack < -kAuditTolerance

  double slack() const { return rhs - lhs; }
};

/// What one round exposes to the audit.
struct RoundTrace {
  std::size_t round = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Point x_bar;
  Point x_bar_next;
  Point x_star;
  double opt_distance_sq = 0.0;   // |x_bar - x*|^2
  double tracker_error = 0.0;     // W
  double honest_grad_norm = 0.0;  // |grad q_H(x_bar)|
  std::size_t byz_survivors = 0;
  Point correction;               // filter perturbation E
  std::vector<std::size_t> honest_agents;
  std::vector<LocalTrace> local;  // one per honest agent, same order
};

struct AuditContext {
  CurvatureConstants curvature;
  double sigma_sq = 0.0;  // actual gradient-noise variance of the run
  bool noise_free = false;
  std::size_t t_local = 1;
  std::size_t n_byzantine = 0;
  std::size_t n_honest = 1;
  std::size_t replication = 0;
};

struct AuditStatus {
  AuditCheck check;
  bool enabled = false;
  std::string note;
  std::size_t rounds_audited = 0;
  std::size_t rounds_skipped = 0;
};

/// Whether a check is meaningful for the run at all (noise gating).
AuditStatus audit_status(AuditCheck check, const AuditContext& ctx);

/// Residuals of every enabled check for one round. Rounds violating a
/// check's step-size precondition produce no residual for that check.
std::vector<AuditResidual> audit_round(const RoundTrace& trace, const AuditContext& ctx);

struct AuditReport {
  std::vector<AuditStatus> status;
  std::vector<AuditResidual> residuals;

  /// Residuals with slack < -kAuditTolerance.
  std::vector<AuditResidual> failures() const;
  bool passed() const { return failures().empty(); }
};

/// Runs audit_round over stored traces. Throws ConfigError if any trace is
/// missing its local records.
AuditReport lemma_audit(std::span<const RoundTrace> traces, const AuditContext& ctx);

}  // namespace rsgd
