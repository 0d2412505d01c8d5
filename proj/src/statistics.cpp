#include "rsgd/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rsgd {

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return out;
}

std::optional<LineFit> fit_loglog(std::span<const double> values, std::size_t first_k,
                                  std::size_t last_k) {
  if (values.empty()) return std::nullopt;
  last_k = std::min(last_k, values.size() - 1);
  first_k = std::max<std::size_t>(first_k, 1);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = first_k; k <= last_k; ++k) {
    const double v = values[k];
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(v));
  }
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  const double mx = mean_std(xs).mean;
  const double my = mean_std(ys).mean;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.first_k = first_k;
  fit.last_k = last_k;
  fit.points = n;
  return fit;
}

}  // namespace rsgd
