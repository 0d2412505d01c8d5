#include "rsgd/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <map>
#include <utility>

#include "rsgd/errors.hpp"

namespace rsgd {
namespace {

void check_dims(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw DimensionError(static_cast<std::size_t>(a.size()),
                         static_cast<std::size_t>(b.size()));
  }
  if (a.size() == 0) throw ConfigError("points must have dimension d >= 1");
}

// 1 + sin(2r)/(2r), with its limit 2 near the removable singularity.
double pl_sine_radial_factor(double r) {
  if (r < kPlSineSmallRadius) return 2.0;
  return 1.0 + std::sin(2.0 * r) / (2.0 * r);
}

double radial_value(ObjectiveKind kind, double r) {
  double value = 0.5 * r * r;
  if (kind == ObjectiveKind::PlSine) {
    const double s = std::sin(r);
    value += 0.5 * s * s;
  }
  return value;
}

}  // namespace

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ScQuadratic:
      return "sc_quadratic";
    case ObjectiveKind::PlSine:
      return "pl_sine";
  }
  return "unknown";
}

ObjectiveKind objective_kind_from_string(const std::string& name) {
  if (name == "sc_quadratic") return ObjectiveKind::ScQuadratic;
  if (name == "pl_sine") return ObjectiveKind::PlSine;
  throw ConfigError("unknown objective '" + name + "' (expected sc_quadratic or pl_sine)");
}

void sample_gradient_into(ObjectiveKind kind, const Point& x, const Point& sample,
                          Point& out) {
  check_dims(x, sample);
  out = x - sample;
  if (kind == ObjectiveKind::PlSine) out *= pl_sine_radial_factor(out.norm());
}

Point sample_gradient(ObjectiveKind kind, const Point& x, const Point& sample) {
  Point out(x.size());
  sample_gradient_into(kind, x, sample, out);
  return out;
}

double sample_value(ObjectiveKind kind, const Point& x, const Point& sample) {
  check_dims(x, sample);
  return radial_value(kind, (x - sample).norm());
}

Point honest_population_gradient(ObjectiveKind kind, const Point& x, const Point& x_star) {
  return sample_gradient(kind, x, x_star);
}

double population_suboptimality(ObjectiveKind kind, const Point& x, const Point& x_star) {
  return sample_value(kind, x, x_star);
}

double certified_pl_constant() {
  static const double mu = [] {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 20000; ++i) {
      const double r = 1e-3 * i;
      const double q = radial_value(ObjectiveKind::PlSine, r);
      const double dq = r * pl_sine_radial_factor(r);
      best = std::min(best, 0.5 * dq * dq / q);
    }
    // Round down to three significant digits.
    const double scale = std::pow(10.0, 2 - std::floor(std::log10(best)));
    return std::floor(best * scale) / scale;
  }();
  return mu;
}

double estimate_pl_sine_sigma_sq(double noise_std, std::size_t dim, std::uint64_t seed,
                                 std::size_t draws) {
  if (dim == 0) throw ConfigError("dimension must be >= 1");
  if (noise_std == 0.0 || draws == 0) return 0.0;
  RandomStream rng(seed, {dim});
  const Point x_star = Point::Zero(static_cast<Eigen::Index>(dim));
  Point x = x_star;
  x(0) += 1.0;
  const Point exact = honest_population_gradient(ObjectiveKind::PlSine, x, x_star);
  const AgentData data = AgentData::population(x_star, noise_std);
  Point sample(x.size());
  Point grad(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    stochastic_gradient_into(ObjectiveKind::PlSine, x, data, rng, sample, grad);
    total += (grad - exact).squaredNorm();
  }
  return total / static_cast<double>(draws);
}

CurvatureConstants curvature(ObjectiveKind kind, double noise_std, std::size_t dim) {
  if (dim == 0) throw ConfigError("dimension must be >= 1");
  const double d = static_cast<double>(dim);
  switch (kind) {
    case ObjectiveKind::ScQuadratic:
      return {1.0, 1.0, d * noise_std * noise_std};
    case ObjectiveKind::PlSine: {
      // The estimate is deterministic but costs 1e5 gradient draws; cache it.
      static std::mutex mutex;
      static std::map<std::pair<double, std::size_t>, double> cache;
      double sigma_sq = 0.0;
      {
        std::lock_guard<std::mutex> lock(mutex);
        auto key = std::make_pair(noise_std, dim);
        auto it = cache.find(key);
        if (it == cache.end()) {
          it = cache.emplace(key, estimate_pl_sine_sigma_sq(noise_std, dim)).first;
        }
        sigma_sq = it->second;
      }
      return {certified_pl_constant(), 2.0, sigma_sq};
    }
  }
  throw ConfigError("unknown objective kind");
}

// ---------------------------------------------------------------------------

AgentData AgentData::population(Point center, double noise_std) {
  if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
  AgentData data;
  data.center_ = std::move(center);
  data.noise_std_ = noise_std;
  data.population_ = true;
  return data;
}

AgentData AgentData::finite_sample(Point center, double noise_std, std::size_t count,
                                   RandomStream& rng) {
  if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
  if (count == 0) throw ConfigError("finite-sample data model needs samples_per_agent >= 1");
  AgentData data;
  data.center_ = std::move(center);
  data.noise_std_ = noise_std;
  data.population_ = false;
  data.samples_.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    Point s = data.center_;
    for (Eigen::Index c = 0; c < s.size(); ++c) s(c) += noise_std * rng.gaussian();
    data.samples_.push_back(std::move(s));
  }
  return data;
}

AgentData AgentData::from_model(const DataModel& model, Point center, RandomStream& rng) {
  if (const auto* finite = std::get_if<FiniteSample>(&model.mode)) {
    return finite_sample(std::move(center), model.noise_std, finite->samples_per_agent, rng);
  }
  return population(std::move(center), model.noise_std);
}

void AgentData::draw_sample(RandomStream& rng, Point& out) const {
  if (!population_) {
    if (samples_.empty()) throw ConfigError("finite-sample data model has no samples");
    out = samples_[rng.uniform_index(samples_.size())];
    return;
  }
  out = center_;
  if (noise_std_ == 0.0) return;
  for (Eigen::Index c = 0; c < out.size(); ++c) out(c) += noise_std_ * rng.gaussian();
}

void stochastic_gradient_into(ObjectiveKind kind, const Point& x, const AgentData& data,
                              RandomStream& rng, Point& scratch, Point& out) {
  data.draw_sample(rng, scratch);
  sample_gradient_into(kind, x, scratch, out);
}

Point stochastic_gradient(ObjectiveKind kind, const Point& x, const AgentData& data,
                          RandomStream& rng) {
  Point scratch(x.size());
  Point out(x.size());
  stochastic_gradient_into(kind, x, data, rng, scratch, out);
  return out;
}

}  // namespace rsgd
