#pragma once

// Experiment objective families and their gradient oracles.
//
//   ScQuadratic:  q(x; c) = 1/2 |x - c|^2
//   PlSine:       q(x; c) = 1/2 |x - c|^2 + 1/2 sin^2(|x - c|)
//
// Both are radial in r = |x - c| and minimized at the sample center c. The
// PlSine family is nonconvex but satisfies a Polyak-Lojasiewicz inequality.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rsgd/random.hpp"

namespace rsgd {

using Point = Eigen::VectorXd;

enum class ObjectiveKind { ScQuadratic, PlSine };

std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(const std::string& name);

struct CurvatureConstants {
  double mu = 1.0;
  double lipschitz = 1.0;
  double sigma_sq = 0.0;
};

/// Below this radius the PlSine radial factor sin(2r)/(2r) is replaced by 1.
inline constexpr double kPlSineSmallRadius = 1e-8;

/// Seed used for the one-off Monte Carlo estimate of the PlSine gradient
/// variance. Recorded in every run manifest.
inline constexpr std::uint64_t kSigmaEstimateSeed = 0x5eed5157ULL;
inline constexpr std::size_t kSigmaEstimateDraws = 100000;

/// Gradient of q(.; sample) at x.
Point sample_gradient(ObjectiveKind kind, const Point& x, const Point& sample);

/// Allocation-free variant; `out` must already have x's size.
void sample_gradient_into(ObjectiveKind kind, const Point& x, const Point& sample,
                          Point& out);

/// q(x; sample).
double sample_value(ObjectiveKind kind, const Point& x, const Point& sample);

/// Exact gradient of the idealized honest objective (sample = x_star).
Point honest_population_gradient(ObjectiveKind kind, const Point& x, const Point& x_star);

/// q_H(x) - q_H(x_star) for the idealized honest objective.
double population_suboptimality(ObjectiveKind kind, const Point& x, const Point& x_star);

/// Largest mu (rounded down to 3 significant digits) such that
/// 1/2 q'(r)^2 >= mu q(r) on the radial grid r = 1e-3, 2e-3, ..., 20.
double certified_pl_constant();

/// Monte Carlo estimate of E|g(x; X) - grad q(x; x_star)|^2 for PlSine at
/// x = x_star + e_1 with X = x_star + noise_std * Z.
double estimate_pl_sine_sigma_sq(double noise_std, std::size_t dim,
                                 std::uint64_t seed = kSigmaEstimateSeed,
                                 std::size_t draws = kSigmaEstimateDraws);

CurvatureConstants curvature(ObjectiveKind kind, double noise_std, std::size_t dim);

// ---------------------------------------------------------------------------
// Data models

struct FiniteSample {
  std::size_t samples_per_agent = 100;
};
struct Population {};

struct DataModel {
  std::variant<FiniteSample, Population> mode = FiniteSample{};
  Point truth;
  double noise_std = 1.0;

  bool is_population() const { return std::holds_alternative<Population>(mode); }
};

/// One agent's view of the data: its center plus either a frozen sample set
/// (FiniteSample) or the recipe for fresh draws (Population).
class AgentData {
 public:
  static AgentData population(Point center, double noise_std);

  /// Draws `count` samples center + noise_std * Z from `rng` and freezes them.
  static AgentData finite_sample(Point center, double noise_std, std::size_t count,
                                 RandomStream& rng);

  static AgentData from_model(const DataModel& model, Point center, RandomStream& rng);

  const Point& center() const { return center_; }
  double noise_std() const { return noise_std_; }
  bool is_population() const { return population_; }
  const std::vector<Point>& samples() const { return samples_; }

  /// Writes one sample into `out` (uniform index or fresh Gaussian draw).
  void draw_sample(RandomStream& rng, Point& out) const;

 private:
  AgentData() = default;

  Point center_;
  double noise_std_ = 0.0;
  bool population_ = true;
  std::vector<Point> samples_;
};

/// Stochastic gradient at x from the agent's data, consuming `rng`.
/// `scratch` receives the drawn sample; `out` the gradient.
void stochastic_gradient_into(ObjectiveKind kind, const Point& x, const AgentData& data,
                              RandomStream& rng, Point& scratch, Point& out);

Point stochastic_gradient(ObjectiveKind kind, const Point& x, const AgentData& data,
                          RandomStream& rng);

}  // namespace rsgd
