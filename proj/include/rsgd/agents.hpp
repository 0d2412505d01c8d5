#pragma once

// Honest two-time-scale local loop and Byzantine attack models.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rsgd/objectives.hpp"
#include "rsgd/random.hpp"

namespace rsgd {

/// Per-agent iterate and gradient tracker. `y` survives across rounds.
struct HonestAgentState {
  std::size_t agent_id = 0;
  Point x;
  Point y;
};

/// Attacker that runs the honest dynamics on data centered at factor * x_star.
struct ShiftedMean {
  double factor = 2.0;
};
/// Runs honest dynamics and reflects the resulting displacement through x_bar.
struct SignFlip {};
/// Sends x_bar plus isotropic Gaussian noise of the given scale.
struct LargeNoise {
  double scale = 10.0;
};

using ByzantineAttack = std::variant<ShiftedMean, SignFlip, LargeNoise>;

std::string to_string(const ByzantineAttack& attack);

/// Iterates, trackers and gradient errors for t = 0..T of one local round.
struct LocalTrace {
  std::vector<Point> x;
  std::vector<Point> y;
  std::vector<Point> e;
};

/// Iterate-norm guard. Beyond this the round aborts with DivergenceError.
inline constexpr double kDivergenceNorm = 1e12;

/// Everything one local round needs besides the agent state.
struct LocalRoundInput {
  const Point& x_bar;
  double alpha = 1.0;
  double beta = 0.0;
  std::size_t t_local = 1;
  std::size_t round = 0;
  ObjectiveKind kind = ObjectiveKind::ScQuadratic;
};

/// Runs T steps of
///   x_{t+1} = x_t - beta * y_t
///   y_{t+1} = (1 - alpha) y_t + alpha * g(x_t)
/// from x_0 = x_bar, leaving y_T in state.y. Returns x_T.
///
/// When `trace` is non-null it receives (x_t, y_t, e_t) for t = 0..T with
/// e_t = y_t - reference_gradient; `reference_gradient` must then be set.
Point honest_local_round(HonestAgentState& state, const LocalRoundInput& in,
                         const AgentData& data, RandomStream& rng,
                         LocalTrace* trace = nullptr,
                         const Point* reference_gradient = nullptr);

/// Message sent by a Byzantine agent. `data` is the attacker's own data
/// (centered at factor * x_star for ShiftedMean); `state` is its tracker.
Point byzantine_message(const ByzantineAttack& attack, HonestAgentState& state,
                        const LocalRoundInput& in, const AgentData& data, RandomStream& rng);

/// y - grad q_H(x_bar).
Point gradient_error(const Point& y, const Point& x_bar, ObjectiveKind kind,
                     const Point& x_star);

}  // namespace rsgd
