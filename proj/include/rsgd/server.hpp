#pragma once

// Comparative-elimination (CE) filter and survivor averaging.
//
// The server sees only (agent index, message) pairs. Honest/Byzantine
// labels enter solely through `label_outcome`, which fills the diagnostic
// counts after the filter has decided.

#include <cstddef>
#include <span>
#include <vector>

#include "rsgd/objectives.hpp"

namespace rsgd {

struct Message {
  std::size_t agent = 0;
  Point point;
};

struct FilterOutcome {
  /// Kept agents, in ascending (distance, agent) order. Size N - f.
  std::vector<std::size_t> survivors;
  /// Dropped agents, in ascending (distance, agent) order. Size f.
  std::vector<std::size_t> eliminated;
  /// distances[agent] = |x_bar - m_agent|; non-finite values become +inf.
  std::vector<double> distances;
  /// Diagnostics from ground-truth labels (see label_outcome).
  std::size_t byz_survivors = 0;
  std::size_t honest_eliminated = 0;
  /// True when a non-finite message survived (more than f garbage messages).
  bool non_finite_survivor = false;
};

/// Sorts messages by distance to x_bar (ties by ascending agent index) and
/// keeps the N - f closest. Agent indices must be a permutation of 0..N-1.
FilterOutcome ce_filter(std::span<const Message> messages, const Point& x_bar, std::size_t f);

/// Fills byz_survivors and honest_eliminated from labels indexed by agent.
void label_outcome(FilterOutcome& outcome, const std::vector<bool>& is_byzantine);

/// Arithmetic mean, summed in the given order.
Point aggregate(std::span<const Point> survivor_messages);

/// Mean of the surviving messages, summed in ascending agent index.
Point aggregate_survivors(const FilterOutcome& outcome, std::span<const Message> messages);

/// Filter-induced perturbation of the honest average
///   E = (1/|H|) [ sum_{i in B_k} (m_i - x_bar) - sum_{i in H \ H_k} (m_i - x_bar) ]
/// where B_k are Byzantine survivors and H \ H_k eliminated honest agents.
Point byzantine_correction_term(const FilterOutcome& outcome, std::span<const Message> messages,
                                const std::vector<bool>& is_byzantine, const Point& x_bar);

}  // namespace rsgd
