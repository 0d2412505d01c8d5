#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace rsgd {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

/// Two-pass mean and sample standard deviation, summed in index order.
MeanStd mean_std(std::span<const double> values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t first_k = 0;
  std::size_t last_k = 0;
  std::size_t points = 0;
};

/// Least-squares fit of log(values[k]) against log(k) for k in
/// [first_k, last_k]. Non-positive or non-finite values are skipped.
/// Returns nullopt when fewer than two usable points remain.
std::optional<LineFit> fit_loglog(std::span<const double> values, std::size_t first_k,
                                  std::size_t last_k);

}  // namespace rsgd
