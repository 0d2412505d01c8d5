#include "rsgd/server.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

// Index of each agent's message inside `messages`.
std::vector<std::size_t> index_by_agent(std::span<const Message> messages) {
  const std::size_t n = messages.size();
  std::vector<std::size_t> slot(n, n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t a = messages[pos].agent;
    if (a >= n || slot[a] != n) {
      throw ConfigError("agent indices must be a permutation of 0..N-1 (bad index " +
                        std::to_string(a) + ")");
    }
    slot[a] = pos;
  }
  return slot;
}

}  // namespace

FilterOutcome ce_filter(std::span<const Message> messages, const Point& x_bar, std::size_t f) {
  const std::size_t n = messages.size();
  if (f >= n) {
    throw ConfigError("CE filter needs f < N (got f=" + std::to_string(f) +
                      ", N=" + std::to_string(n) + ")");
  }
  const auto slot = index_by_agent(messages);

  FilterOutcome out;
  out.distances.assign(n, 0.0);
  for (const auto& m : messages) {
    if (m.point.size() != x_bar.size()) {
      throw DimensionError(static_cast<std::size_t>(x_bar.size()),
                           static_cast<std::size_t>(m.point.size()));
    }
    const double dist = (x_bar - m.point).norm();
    out.distances[m.agent] = std::isfinite(dist) ? dist : std::numeric_limits<double>::infinity();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.distances[a] != out.distances[b]) return out.distances[a] < out.distances[b];
    return a < b;
  });
  out.survivors.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(f));
  out.eliminated.assign(order.end() - static_cast<std::ptrdiff_t>(f), order.end());
  for (auto a : out.survivors) {
    if (!messages[slot[a]].point.allFinite()) out.non_finite_survivor = true;
  }
  return out;
}

void label_outcome(FilterOutcome& outcome, const std::vector<bool>& is_byzantine) {
  outcome.byz_survivors = 0;
  outcome.honest_eliminated = 0;
  for (auto a : outcome.survivors) outcome.byz_survivors += is_byzantine.at(a) ? 1 : 0;
  for (auto a : outcome.eliminated) outcome.honest_eliminated += is_byzantine.at(a) ? 0 : 1;
}

Point aggregate(std::span<const Point> survivor_messages) {
  if (survivor_messages.empty()) throw ConfigError("cannot aggregate an empty survivor set");
  Point sum = Point::Zero(survivor_messages.front().size());
  for (const auto& m : survivor_messages) {
    if (m.size() != sum.size()) {
      throw DimensionError(static_cast<std::size_t>(sum.size()), static_cast<std::size_t>(m.size()));
    }
    sum += m;
  }
  return sum / static_cast<double>(survivor_messages.size());
}

Point aggregate_survivors(const FilterOutcome& outcome, std::span<const Message> messages) {
  const auto slot = index_by_agent(messages);
  std::vector<std::size_t> ids = outcome.survivors;
  std::sort(ids.begin(), ids.end());
  std::vector<Point> points;
  points.reserve(ids.size());
  for (auto a : ids) points.push_back(messages[slot[a]].point);
  return aggregate(points);
}

Point byzantine_correction_term(const FilterOutcome& outcome, std::span<const Message> messages,
                                const std::vector<bool>& is_byzantine, const Point& x_bar) {
  const auto slot = index_by_agent(messages);
  std::size_t n_honest = 0;
  for (std::size_t a = 0; a < messages.size(); ++a) n_honest += is_byzantine.at(a) ? 0 : 1;
  Point e = Point::Zero(x_bar.size());
  if (n_honest == 0) return e;
  std::vector<std::size_t> kept = outcome.survivors;
  std::vector<std::size_t> dropped = outcome.eliminated;
  std::sort(kept.begin(), kept.end());
  std::sort(dropped.begin(), dropped.end());
  for (auto a : kept) {
    if (is_byzantine.at(a)) e += messages[slot[a]].point - x_bar;
  }
  for (auto a : dropped) {
    if (!is_byzantine.at(a)) e -= messages[slot[a]].point - x_bar;
  }
  return e / static_cast<double>(n_honest);
}

}  // namespace rsgd
