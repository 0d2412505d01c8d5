#include "rsgd/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

// Stream path reserved for run-level draws (x*, x_bar_0 direction).
constexpr std::uint64_t kSetupStream = 0xffffffffffffffffULL;

Point initial_tracker(const SimulationConfig& config, const Point& x_bar, const AgentData& data,
                      RandomStream& rng) {
  if (config.tracker_init == TrackerInit::Zero) return Point::Zero(x_bar.size());
  return stochastic_gradient(config.objective, x_bar, data, rng);
}

Point agent_center(const SimulationConfig& config, const Point& x_star, bool byzantine) {
  if (!byzantine) return x_star;
  if (const auto* shifted = std::get_if<ShiftedMean>(&config.attack)) {
    return shifted->factor * x_star;
  }
  return x_star;
}

}  // namespace

std::string to_string(TrackerInit init) {
  return init == TrackerInit::Zero ? "zero" : "first_sample";
}

void SimulationConfig::validate() const {
  if (n_agents == 0) throw ConfigError("constraint violated: N >= 1");
  if (n_byzantine >= n_agents) throw ConfigError("constraint violated: f < N");
  if (t_local < 1) throw ConfigError("constraint violated: T >= 1");
  if (dim < 1) throw ConfigError("constraint violated: d >= 1");
  if (replications < 1) throw ConfigError("constraint violated: replications >= 1");
  if (data_model.noise_std < 0.0) throw ConfigError("constraint violated: noise_std >= 0");
  if (const auto* finite = std::get_if<FiniteSample>(&data_model.mode)) {
    if (finite->samples_per_agent < 1) {
      throw ConfigError("constraint violated: samples_per_agent >= 1");
    }
  }
  if (data_model.truth.size() != 0 && static_cast<std::size_t>(data_model.truth.size()) != dim) {
    throw DimensionError(dim, static_cast<std::size_t>(data_model.truth.size()));
  }
  if (!(schedule.c_alpha > 0.0)) throw ConfigError("constraint violated: C_alpha > 0");
  if (!(schedule.c_beta > 0.0)) throw ConfigError("constraint violated: C_beta > 0");
  if (!(schedule.h >= 0.0)) throw ConfigError("constraint violated: h >= 0");
  if (fixed_alpha && !(*fixed_alpha > 0.0 && *fixed_alpha <= 1.0)) {
    throw ConfigError("constraint violated: 0 < fixed_alpha <= 1");
  }
  if (!(x0_distance >= 0.0)) throw ConfigError("constraint violated: x0_distance >= 0");
}

bool is_byzantine_index(const SimulationConfig& config, std::size_t agent) {
  return agent < config.n_byzantine;
}

Point resolve_truth(const SimulationConfig& config) {
  if (config.data_model.truth.size() != 0) return config.data_model.truth;
  RandomStream rng(config.master_seed, {kSetupStream, 0});
  Point truth(static_cast<Eigen::Index>(config.dim));
  for (Eigen::Index c = 0; c < truth.size(); ++c) truth(c) = rng.gaussian();
  return truth;
}

Point initial_point(const SimulationConfig& config, const Point& truth) {
  RandomStream rng(config.master_seed, {kSetupStream, 1});
  Point u(truth.size());
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index c = 0; c < u.size(); ++c) u(c) = rng.gaussian();
    norm = u.norm();
  }
  return truth + config.x0_distance * (u / norm);
}

CurvatureConstants run_curvature(const SimulationConfig& config) {
  return curvature(config.objective, config.data_model.noise_std, config.dim);
}

double compute_W(std::span<const HonestAgentState> honest, const Point& x_bar,
                 ObjectiveKind kind, const Point& x_star) {
  if (honest.empty()) return 0.0;
  const Point g = honest_population_gradient(kind, x_bar, x_star);
  double total = 0.0;
  for (const auto& s : honest) total += (s.y - g).squaredNorm();
  return total / static_cast<double>(honest.size());
}

double lyapunov(Regime /*regime*/, double opt_error, double W) { return opt_error + W; }

double theoretical_bound(Regime regime, const ScheduleParams& params,
                         const CurvatureConstants& curvature, const SimulationConfig& config,
                         double v0, std::size_t k) {
  const double denom = 1.0 + params.h + static_cast<double>(k);
  const double T = static_cast<double>(config.t_local);
  const double f = static_cast<double>(config.n_byzantine);
  const double H = static_cast<double>(config.n_honest());
  const double L = curvature.lipschitz;
  const double s2 = curvature.sigma_sq;
  const double ca2 = params.c_alpha * params.c_alpha;
  const double transient = params.h * params.h * v0 / (denom * denom);
  if (regime == Regime::SC) {
    return transient + 150.0 * std::pow(L + 1, 3) * T * T * s2 * ca2 / (curvature.mu * denom) +
           128.0 * (L + 1) * (L + 1) * T * T * s2 * f * ca2 / (denom * H);
  }
  return transient + 150.0 * T * s2 * ca2 / denom + 112.0 * T * T * s2 * f * ca2 / (denom * H);
}

double bound_for_round(Regime regime, const ScheduleParams& params,
                       const CurvatureConstants& curvature, const SimulationConfig& config,
                       double v0, std::size_t k) {
  if (k == 0) return v0;
  return theoretical_bound(regime, params, curvature, config, v0, k - 1);
}

double contraction_diagnostic(Regime regime, std::size_t k, const ScheduleParams& params,
                              const CurvatureConstants& curvature, std::size_t t_local,
                              std::size_t byz_survivors, std::size_t n_honest) {
  const double b = beta(params, k);
  const double T = static_cast<double>(t_local);
  const double mu = curvature.mu;
  const double L = curvature.lipschitz;
  const double ratio = static_cast<double>(byz_survivors) / static_cast<double>(n_honest);
  if (regime == Regime::SC) {
    return 1.0 - 23.0 * mu * T * b / 12.0 + 17.0 * L * T * b * ratio / 3.0;
  }
  return 1.0 - 9.0 * mu * T * b / 6.0 + 4.0 * L * T * b * ratio;
}

// ---------------------------------------------------------------------------

World::World(const SimulationConfig& config, std::size_t replication)
    : config_(config), replication_(replication) {
  config_.validate();
  curvature_ = run_curvature(config_);
  x_star_ = resolve_truth(config_);
  x_bar_ = initial_point(config_, x_star_);
  const std::size_t n = config_.n_agents;
  states_.reserve(n);
  data_.reserve(n);
  streams_.reserve(n);
  byzantine_.assign(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    const bool byz = is_byzantine_index(config_, a);
    byzantine_[a] = byz;
    streams_.emplace_back(config_.master_seed, std::initializer_list<std::uint64_t>{replication, a});
    data_.push_back(
        AgentData::from_model(config_.data_model, agent_center(config_, x_star_, byz), streams_[a]));
    HonestAgentState s;
    s.agent_id = a;
    s.x = x_bar_;
    s.y = initial_tracker(config_, x_bar_, data_[a], streams_[a]);
    states_.push_back(std::move(s));
  }
}

double World::alpha_at(std::size_t k) const {
  return config_.fixed_alpha ? *config_.fixed_alpha : alpha(config_.schedule, k);
}

double World::beta_at(std::size_t k) const { return beta(config_.schedule, k); }

AuditContext World::audit_context() const {
  AuditContext ctx;
  ctx.curvature = curvature_;
  ctx.sigma_sq = curvature_.sigma_sq;
  ctx.noise_free = config_.data_model.noise_std == 0.0;
  ctx.t_local = config_.t_local;
  ctx.n_byzantine = config_.n_byzantine;
  ctx.n_honest = config_.n_honest();
  ctx.replication = replication_;
  return ctx;
}

RoundResult World::run_round() {
  const std::size_t k = round_;
  const std::size_t n = config_.n_agents;
  const std::size_t f = config_.n_byzantine;
  const bool audit = config_.audit;

  RoundResult result;
  MetricRow& row = result.row;
  row.k = k;
  row.alpha = alpha_at(k);
  row.beta = beta_at(k);

  const Point reference = honest_population_gradient(config_.objective, x_bar_, x_star_);
  const double dist_sq = (x_bar_ - x_star_).squaredNorm();
  row.opt_error = config_.regime == Regime::SC
                      ? dist_sq
                      : population_suboptimality(config_.objective, x_bar_, x_star_);
  row.W = compute_W(std::span<const HonestAgentState>(states_).subspan(f), x_bar_,
                    config_.objective, x_star_);
  row.V = lyapunov(config_.regime, row.opt_error, row.W);

  const LocalRoundInput input{x_bar_, row.alpha, row.beta, config_.t_local, k, config_.objective};
  std::vector<Message> messages(n);
  if (audit) {
    result.trace.emplace();
    result.trace->local.resize(n - f);
  }
  for (std::size_t a = 0; a < n; ++a) {
    messages[a].agent = a;
    if (byzantine_[a]) {
      messages[a].point = byzantine_message(config_.attack, states_[a], input, data_[a], streams_[a]);
    } else {
      LocalTrace* trace = audit ? &result.trace->local[a - f] : nullptr;
      messages[a].point =
          honest_local_round(states_[a], input, data_[a], streams_[a], trace, &reference);
    }
  }

  result.filter = ce_filter(messages, x_bar_, f);
  label_outcome(result.filter, byzantine_);
  row.byz_survivors = result.filter.byz_survivors;
  row.honest_eliminated = result.filter.honest_eliminated;
  row.contraction = contraction_diagnostic(config_.regime, k, config_.schedule, curvature_,
                                           config_.t_local, row.byz_survivors, config_.n_honest());

  Point next = aggregate_survivors(result.filter, messages);
  if (!next.allFinite() || next.norm() > kDivergenceNorm) {
    throw DivergenceError("aggregate diverged at round " + std::to_string(k) +
                              (result.filter.non_finite_survivor ? " (non-finite survivor)" : ""),
                          k, config_.t_local);
  }

  if (audit) {
    RoundTrace& tr = *result.trace;
    tr.round = k;
    tr.alpha = row.alpha;
    tr.beta = row.beta;
    tr.x_bar = x_bar_;
    tr.x_bar_next = next;
    tr.x_star = x_star_;
    tr.opt_distance_sq = dist_sq;
    tr.tracker_error = row.W;
    tr.honest_grad_norm = reference.norm();
    tr.byz_survivors = row.byz_survivors;
    tr.correction = byzantine_correction_term(result.filter, messages, byzantine_, x_bar_);
    for (std::size_t a = f; a < n; ++a) tr.honest_agents.push_back(a);
  }

  x_bar_ = std::move(next);
  ++round_;
  return result;
}

TrajectoryMetrics run_trajectory(const SimulationConfig& config, std::size_t replication) {
  TrajectoryMetrics out;
  out.replication = replication;
  out.rows.reserve(config.n_rounds);
  try {
    World world(config, replication);
    const AuditContext ctx = world.audit_context();
    for (std::size_t k = 0; k < config.n_rounds; ++k) {
      RoundResult r = world.run_round();
      out.rows.push_back(r.row);
      if (r.trace) {
        auto residuals = audit_round(*r.trace, ctx);
        out.audit.insert(out.audit.end(), residuals.begin(), residuals.end());
      }
    }
  } catch (const DivergenceError& e) {
    throw e.with_replication(replication);
  }
  return out;
}

ExperimentSummary summarize(const SimulationConfig& config, const CurvatureConstants& curvature,
                            const std::vector<TrajectoryMetrics>& trajectories,
                            bool bound_is_hard) {
  ExperimentSummary summary;
  summary.bound_is_hard = bound_is_hard;
  if (trajectories.empty()) return summary;
  const std::size_t rounds = trajectories.front().rows.size();
  const std::size_t reps = trajectories.size();
  std::vector<double> opt(reps), w(reps), v(reps), byz(reps), contraction(reps);
  summary.rows.reserve(rounds);
  for (std::size_t k = 0; k < rounds; ++k) {
    for (std::size_t r = 0; r < reps; ++r) {
      const MetricRow& m = trajectories[r].rows[k];
      opt[r] = m.opt_error;
      w[r] = m.W;
      v[r] = m.V;
      byz[r] = static_cast<double>(m.byz_survivors);
      contraction[r] = m.contraction;
    }
    SummaryRow row;
    row.k = k;
    row.alpha = trajectories.front().rows[k].alpha;
    row.beta = trajectories.front().rows[k].beta;
    row.opt_error = mean_std(opt);
    row.W = mean_std(w);
    row.V = mean_std(v);
    row.contraction = mean_std(contraction).mean;
    row.byz_survivors_mean = mean_std(byz).mean;
    summary.rows.push_back(row);
  }
  summary.v0 = rounds > 0 ? summary.rows.front().V.mean : 0.0;
  summary.bound_dominated = true;
  for (auto& row : summary.rows) {
    row.bound = bound_for_round(config.regime, config.schedule, curvature, config, summary.v0, row.k);
    if (!(row.V.mean <= row.bound)) summary.bound_dominated = false;
  }
  if (rounds >= kMinRoundsForFit) {
    std::vector<double> mean_v(rounds);
    for (std::size_t k = 0; k < rounds; ++k) mean_v[k] = summary.rows[k].V.mean;
    summary.rate_fit = fit_loglog(mean_v, rounds - rounds / 2, rounds - 1);
  }
  return summary;
}

ExperimentResult run_experiment(const SimulationConfig& config, std::size_t workers) {
  config.validate();
  ExperimentResult result;
  result.curvature = run_curvature(config);
  result.basic_report = validate_basic(config.schedule, result.curvature, config.t_local);
  result.theorem_report =
      validate_theorem(config.regime, config.schedule, result.curvature, config.t_local);
  result.filter_report =
      validate_filter_condition(config.n_byzantine, config.n_agents, result.curvature);
  if (!result.basic_report.satisfied()) {
    std::ostringstream msg;
    msg << "schedule violates basic step-size conditions:";
    for (const auto& v : result.basic_report.violations()) {
      msg << " [" << v.name << ": " << v.lhs << " vs " << v.rhs << "]";
    }
    throw ConfigError(msg.str());
  }

  const std::size_t reps = config.replications;
  std::vector<TrajectoryMetrics> trajectories(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      try {
        trajectories[r] = run_trajectory(config, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, reps);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  std::ostringstream failed;
  std::optional<DivergenceError> first;
  for (std::size_t r = 0; r < reps; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const DivergenceError& e) {
      failed << "\n  replication " << r << ": " << e.what();
      if (!first) first = e;
    }
  }
  if (first) {
    throw DivergenceError("divergence in replications:" + failed.str(), first->round(),
                          first->step(), first->agent(), first->replication());
  }

  const bool hard = result.theorem_report.satisfied() && result.filter_report.satisfied();
  result.summary = summarize(config, result.curvature, trajectories, hard);
  result.trajectories = std::move(trajectories);
  return result;
}

}  // namespace rsgd
