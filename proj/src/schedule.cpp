#include "rsgd/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

InequalityCheck less_equal(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, "<=", rhs, lhs <= rhs};
}

InequalityCheck greater_equal(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, ">=", rhs, lhs >= rhs};
}

InequalityCheck equal_rel(std::string name, double lhs, double rhs) {
  const bool ok = std::abs(lhs - rhs) <= kEqualityRelTol * std::max(std::abs(lhs), std::abs(rhs));
  return {std::move(name), lhs, "==", rhs, ok};
}

double pow4(double v) { return v * v * v * v; }

}  // namespace

std::string to_string(Regime regime) { return regime == Regime::SC ? "sc" : "pl"; }

Regime regime_from_string(const std::string& name) {
  if (name == "sc") return Regime::SC;
  if (name == "pl") return Regime::PL;
  throw ConfigError("unknown regime '" + name + "' (expected sc or pl)");
}

double alpha(const ScheduleParams& params, std::size_t k) {
  return params.c_alpha / (1.0 + params.h + static_cast<double>(k));
}

double beta(const ScheduleParams& params, std::size_t k) {
  return params.c_beta / (1.0 + params.h + static_cast<double>(k));
}

std::vector<InequalityCheck> RegimeReport::violations() const {
  std::vector<InequalityCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const InequalityCheck& c) { return !c.holds; });
  return out;
}

const InequalityCheck* RegimeReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const InequalityCheck& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

RegimeReport validate_basic(const ScheduleParams& params, const CurvatureConstants& curvature,
                            std::size_t t_local) {
  RegimeReport report{"basic", {}};
  report.checks.push_back(less_equal("C_beta <= C_alpha", params.c_beta, params.c_alpha));
  report.checks.push_back(less_equal("alpha_0 <= 1", alpha(params, 0), 1.0));
  report.checks.push_back(less_equal(
      "L T beta_0 <= 1",
      curvature.lipschitz * static_cast<double>(t_local) * beta(params, 0), 1.0));
  return report;
}

RegimeReport validate_theorem_at(Regime regime, const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local,
                                 std::size_t k) {
  const double mu = curvature.mu;
  const double L = curvature.lipschitz;
  const double T = static_cast<double>(t_local);
  const double a = alpha(params, k);
  const double b = beta(params, k);
  RegimeReport report;
  if (regime == Regime::SC) {
    report.regime = "SC";
    report.checks.push_back(less_equal("alpha_k <= mu/(8^4 (L+1)^4 T)", a,
                                       mu / (pow4(8) * pow4(L + 1) * T)));
    report.checks.push_back(
        less_equal("beta_k <= mu/(12^4 L^2 T)", b, mu / (pow4(12) * L * L * T)));
    report.checks.push_back(less_equal("beta_k/alpha_k <= mu/(14^4 (L+1)^4 T)", b / a,
                                       mu / (pow4(14) * pow4(L + 1) * T)));
    report.checks.push_back(greater_equal("C_alpha >= 84^4 (L+1)^4/(6 mu^2)", params.c_alpha,
                                          pow4(84) * pow4(L + 1) / (6 * mu * mu)));
    report.checks.push_back(equal_rel("C_beta = 72/(mu T)", params.c_beta, 72 / (mu * T)));
    const double h_min = std::max(pow4(8) * pow4(L + 1) * T * params.c_alpha / mu,
                                  pow4(72) * L * L / (18 * mu * mu));
    report.checks.push_back(greater_equal(
        "h >= max{8^4 (L+1)^4 T C_alpha/mu, 72^4 L^2/(18 mu^2)}", params.h, h_min));
  } else {
    report.regime = "PL";
    report.checks.push_back(less_equal("alpha_k <= mu^2/(6^4 (L+1)^3 T)", a,
                                       mu * mu / (pow4(6) * std::pow(L + 1, 3) * T)));
    report.checks.push_back(less_equal("beta_k <= mu^2/(12^4 L^3 T)", b,
                                       mu * mu / (pow4(12) * L * L * L * T)));
    report.checks.push_back(less_equal("beta_k/alpha_k <= mu^2/(12^4 (L+1)^4 T^2)", b / a,
                                       mu * mu / (pow4(12) * pow4(L + 1) * T * T)));
    report.checks.push_back(greater_equal("C_alpha >= 12^5 (L+1)^4 T/mu^3", params.c_alpha,
                                          std::pow(12.0, 5) * pow4(L + 1) * T / (mu * mu * mu)));
    report.checks.push_back(equal_rel("C_beta = 12/(mu T)", params.c_beta, 12 / (mu * T)));
    const double h_min = std::max(pow4(6) * std::pow(L + 1, 3) * T * params.c_alpha / (mu * mu),
                                  std::pow(12.0, 5) * L * L * L / (mu * mu * mu));
    report.checks.push_back(greater_equal(
        "h >= max{6^4 (L+1)^3 T C_alpha/mu^2, 12^5 L^3/mu^3}", params.h, h_min));
  }
  return report;
}

RegimeReport validate_theorem_sc(const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local) {
  return validate_theorem_at(Regime::SC, params, curvature, t_local, 0);
}

RegimeReport validate_theorem_pl(const ScheduleParams& params,
                                 const CurvatureConstants& curvature, std::size_t t_local) {
  return validate_theorem_at(Regime::PL, params, curvature, t_local, 0);
}

RegimeReport validate_theorem(Regime regime, const ScheduleParams& params,
                              const CurvatureConstants& curvature, std::size_t t_local) {
  return validate_theorem_at(regime, params, curvature, t_local, 0);
}

RegimeReport validate_filter_condition(std::size_t f, std::size_t n,
                                       const CurvatureConstants& curvature) {
  if (f >= n) {
    throw ConfigError("filter condition needs f < N (got f=" + std::to_string(f) +
                      ", N=" + std::to_string(n) + ")");
  }
  RegimeReport report{"filter", {}};
  report.checks.push_back(less_equal("f/(N-f) <= mu/(3L)",
                                     static_cast<double>(f) / static_cast<double>(n - f),
                                     curvature.mu / (3.0 * curvature.lipschitz)));
  return report;
}

}  // namespace rsgd
