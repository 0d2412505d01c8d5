#include "rsgd/agents.hpp"

#include <cmath>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

void guard(const Point& v, const LocalRoundInput& in, std::size_t step, std::size_t agent) {
  const double n = v.norm();
  if (!std::isfinite(n) || n > kDivergenceNorm) {
    throw DivergenceError("local iterate diverged (|x| = " + std::to_string(n) + ") at round " +
                              std::to_string(in.round) + ", step " + std::to_string(step),
                          in.round, step, agent);
  }
}

}  // namespace

std::string to_string(const ByzantineAttack& attack) {
  if (std::holds_alternative<ShiftedMean>(attack)) return "shifted_mean";
  if (std::holds_alternative<SignFlip>(attack)) return "sign_flip";
  return "large_noise";
}

Point honest_local_round(HonestAgentState& state, const LocalRoundInput& in,
                         const AgentData& data, RandomStream& rng, LocalTrace* trace,
                         const Point* reference_gradient) {
  const Eigen::Index d = in.x_bar.size();
  if (state.y.size() != d) {
    throw DimensionError(static_cast<std::size_t>(d), static_cast<std::size_t>(state.y.size()));
  }
  if (trace != nullptr && reference_gradient == nullptr) {
    throw ConfigError("local trace requested without a reference gradient");
  }
  state.x = in.x_bar;
  Point sample(d);
  Point grad(d);
  auto record = [&] {
    if (trace == nullptr) return;
    trace->x.push_back(state.x);
    trace->y.push_back(state.y);
    trace->e.push_back(state.y - *reference_gradient);
  };
  if (trace != nullptr) {
    trace->x.clear();
    trace->y.clear();
    trace->e.clear();
  }
  record();
  for (std::size_t t = 0; t < in.t_local; ++t) {
    stochastic_gradient_into(in.kind, state.x, data, rng, sample, grad);
    state.x -= in.beta * state.y;
    state.y = (1.0 - in.alpha) * state.y + in.alpha * grad;
    guard(state.x, in, t + 1, state.agent_id);
    record();
  }
  return state.x;
}

Point byzantine_message(const ByzantineAttack& attack, HonestAgentState& state,
                        const LocalRoundInput& in, const AgentData& data, RandomStream& rng) {
  if (std::holds_alternative<ShiftedMean>(attack)) {
    return honest_local_round(state, in, data, rng);
  }
  if (std::holds_alternative<SignFlip>(attack)) {
    const Point m = honest_local_round(state, in, data, rng);
    return in.x_bar - (m - in.x_bar);
  }
  const double scale = std::get<LargeNoise>(attack).scale;
  Point m = in.x_bar;
  for (Eigen::Index c = 0; c < m.size(); ++c) m(c) += scale * rng.gaussian();
  return m;
}

Point gradient_error(const Point& y, const Point& x_bar, ObjectiveKind kind,
                     const Point& x_star) {
  const Point g = honest_population_gradient(kind, x_bar, x_star);
  if (y.size() != g.size()) {
    throw DimensionError(static_cast<std::size_t>(g.size()), static_cast<std::size_t>(y.size()));
  }
  return y - g;
}

}  // namespace rsgd
