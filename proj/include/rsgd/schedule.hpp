#pragma once

// Decaying two-time-scale step sizes
//
//   alpha_k = C_alpha / (1 + h + k),   beta_k = C_beta / (1 + h + k)
//
// and the parameter conditions the convergence theorems place on them.
// Violations are reported as data; nothing here throws for a bad schedule.

#include <cstddef>
#include <string>
#include <vector>

#include "rsgd/objectives.hpp"

namespace rsgd {

struct ScheduleParams {
  double c_alpha = 1.0;
  double c_beta = 1.0;
  double h = 0.0;
};

enum class Regime { SC, PL };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

double alpha(const ScheduleParams& params, std::size_t k);
double beta(const ScheduleParams& params, std::size_t k);

/// One named inequality with both sides evaluated.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  double rhs = 0.0;
  bool holds = false;
};

struct RegimeReport {
  std::string regime;  // "basic", "SC", "PL" or "filter"
  std::vector<InequalityCheck> checks;

  bool satisfied() const { return violations().empty(); }
  std::vector<InequalityCheck> violations() const;
  const InequalityCheck* find(const std::string& name) const;
};

inline constexpr double kEqualityRelTol = 1e-12;

RegimeReport validate_basic(const ScheduleParams& params, const CurvatureConstants& curvature,
                            std::size_t t_local);

/// Strongly convex regime. Decaying-step conditions are evaluated at k = 0.
RegimeReport validate_theorem_sc(const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local);

/// PL regime. Decaying-step conditions are evaluated at k = 0.
RegimeReport validate_theorem_pl(const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local);

RegimeReport validate_theorem(Regime regime, const ScheduleParams& params,
                              const CurvatureConstants& curvature, std::size_t t_local);

/// f/(n - f) <= mu/(3L). Throws ConfigError when f >= n.
RegimeReport validate_filter_condition(std::size_t f, std::size_t n,
                                       const CurvatureConstants& curvature);

/// Same checks as validate_theorem_sc/pl but with the decaying quantities
/// evaluated at round k instead of 0.
RegimeReport validate_theorem_at(Regime regime, const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local,
                                 std::size_t k);

}  // namespace rsgd
