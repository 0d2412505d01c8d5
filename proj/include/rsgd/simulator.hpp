#pragma once

// Orchestration of K global rounds over N agents, Monte Carlo replication,
// per-round metrics and theoretical bounds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsgd/agents.hpp"
#include "rsgd/audit.hpp"
#include "rsgd/objectives.hpp"
#include "rsgd/random.hpp"
#include "rsgd/schedule.hpp"
#include "rsgd/server.hpp"
#include "rsgd/statistics.hpp"

namespace rsgd {

enum class TrackerInit { Zero, FirstSample };

std::string to_string(TrackerInit init);

struct SimulationConfig {
  std::size_t n_agents = 50;
  std::size_t n_byzantine = 8;
  std::size_t dim = 10;
  std::size_t t_local = 3;
  std::size_t n_rounds = 1000;
  std::size_t replications = 1;
  std::uint64_t master_seed = 1;
  ObjectiveKind objective = ObjectiveKind::ScQuadratic;
  /// `truth` may be left empty; it is then drawn from the master seed.
  DataModel data_model;
  ByzantineAttack attack = ShiftedMean{2.0};
  ScheduleParams schedule;
  Regime regime = Regime::SC;
  bool audit = false;
  TrackerInit tracker_init = TrackerInit::Zero;
  /// Initial distance |x_bar_0 - x*|.
  double x0_distance = 10.0;
  /// Constant fast step in place of the decaying alpha_k.
  std::optional<double> fixed_alpha;

  std::size_t n_honest() const { return n_agents - n_byzantine; }

  /// Throws ConfigError naming the first violated structural constraint.
  void validate() const;
};

/// Byzantine agents occupy indices 0..f-1; honest agents f..N-1.
bool is_byzantine_index(const SimulationConfig& config, std::size_t agent);

/// x* for the run (config truth if set, else a N(0, I) draw from the seed).
Point resolve_truth(const SimulationConfig& config);

/// x* + x0_distance * u with u a unit vector drawn from the seed.
Point initial_point(const SimulationConfig& config, const Point& truth);

CurvatureConstants run_curvature(const SimulationConfig& config);

struct MetricRow {
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double opt_error = 0.0;
  double W = 0.0;
  double V = 0.0;
  double contraction = 1.0;
  std::size_t byz_survivors = 0;
  std::size_t honest_eliminated = 0;
};

struct TrajectoryMetrics {
  std::size_t replication = 0;
  std::vector<MetricRow> rows;
  std::vector<AuditResidual> audit;
};

/// (1/|H|) sum_i |y_i - grad q_H(x_bar)|^2 over the given honest states.
double compute_W(std::span<const HonestAgentState> honest, const Point& x_bar,
                 ObjectiveKind kind, const Point& x_star);

double lyapunov(Regime regime, double opt_error, double W);

/// Right-hand side of the theorem rate bound evaluated at k:
///   SC: h^2 v0/(1+h+k)^2 + 150 (L+1)^3 T^2 s^2 Ca^2/(mu (1+h+k))
///       + 128 (L+1)^2 T^2 s^2 f Ca^2/((1+h+k)|H|)
///   PL: h^2 v0/(1+h+k)^2 + 150 T s^2 Ca^2/(1+h+k) + 112 T^2 s^2 f Ca^2/((1+h+k)|H|)
/// It bounds E[V_{k+1}].
double theoretical_bound(Regime regime, const ScheduleParams& params,
                         const CurvatureConstants& curvature, const SimulationConfig& config,
                         double v0, std::size_t k);

/// Bound on E[V_k] itself: v0 at k = 0, theoretical_bound(k - 1) after.
double bound_for_round(Regime regime, const ScheduleParams& params,
                       const CurvatureConstants& curvature, const SimulationConfig& config,
                       double v0, std::size_t k);

/// Per-round Lyapunov contraction factor with the observed |B_k|.
double contraction_diagnostic(Regime regime, std::size_t k, const ScheduleParams& params,
                              const CurvatureConstants& curvature, std::size_t t_local,
                              std::size_t byz_survivors, std::size_t n_honest);

struct RoundResult {
  MetricRow row;
  FilterOutcome filter;
  std::optional<RoundTrace> trace;  // set when auditing
};

/// One replication's full state: x_bar, every agent's tracker, data and
/// random stream.
class World {
 public:
  World(const SimulationConfig& config, std::size_t replication);

  /// Runs round k = round(): local updates, filter, aggregation. Metrics
  /// describe x_bar_k and the round-start trackers.
  RoundResult run_round();

  std::size_t round() const { return round_; }
  const Point& x_bar() const { return x_bar_; }
  const Point& x_star() const { return x_star_; }
  const std::vector<HonestAgentState>& agents() const { return states_; }
  const CurvatureConstants& curvature() const { return curvature_; }
  AuditContext audit_context() const;

  double alpha_at(std::size_t k) const;
  double beta_at(std::size_t k) const;

 private:
  SimulationConfig config_;
  std::size_t replication_;
  CurvatureConstants curvature_;
  Point x_star_;
  Point x_bar_;
  std::size_t round_ = 0;
  std::vector<HonestAgentState> states_;
  std::vector<AgentData> data_;
  std::vector<RandomStream> streams_;
  std::vector<bool> byzantine_;
};

/// Runs every round of one replication.
TrajectoryMetrics run_trajectory(const SimulationConfig& config, std::size_t replication);

struct SummaryRow {
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  MeanStd opt_error;
  MeanStd W;
  MeanStd V;
  double bound = 0.0;
  double contraction = 0.0;
  double byz_survivors_mean = 0.0;
};

struct ExperimentSummary {
  std::vector<SummaryRow> rows;
  std::optional<LineFit> rate_fit;  // log-log fit of mean V over the last half
  double v0 = 0.0;                  // mean V_0
  bool bound_dominated = false;     // mean V_k <= bound for every k
  bool bound_is_hard = false;       // theorem and filter conditions hold
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<TrajectoryMetrics> trajectories;
  RegimeReport basic_report;
  RegimeReport theorem_report;
  RegimeReport filter_report;
  CurvatureConstants curvature;
};

/// Minimum K for a rate fit; the fit window is the last half of rounds.
inline constexpr std::size_t kMinRoundsForFit = 200;

ExperimentSummary summarize(const SimulationConfig& config, const CurvatureConstants& curvature,
                            const std::vector<TrajectoryMetrics>& trajectories,
                            bool bound_is_hard);

/// Runs all replications on `workers` threads. Output is independent of
/// the worker count. Throws ConfigError when basic schedule validation
/// fails and DivergenceError listing every failed replication.
ExperimentResult run_experiment(const SimulationConfig& config, std::size_t workers = 1);

}  // namespace rsgd
