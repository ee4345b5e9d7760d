#include "aide/stats.hpp"

#include <cmath>
#include <cstddef>

#include "aide/error.hpp"

namespace aide {

double quantile_type7(std::span<const double> sorted, double q) {
  if (sorted.empty()) {
    throw InvalidInput("quantile of an empty sample");
  }
  if (q < 0.0 || q > 1.0) {
    throw InvalidInput("quantile level must be in [0, 1]");
  }
  const std::size_t n = sorted.size();
  if (n == 1) {
    return sorted[0];
  }
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) {
    return sorted[n - 1];
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw InvalidInput("pearson: length mismatch");
  }
  if (xs.size() < 2) {
    throw InvalidInput("pearson: need at least 2 points");
  }
  // Running means with co-moment updates (Welford style).
  double mean_x = 0.0, mean_y = 0.0;
  double m2_x = 0.0, m2_y = 0.0, co = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double k = 1.0 / static_cast<double>(i + 1);
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    mean_x += dx * k;
    mean_y += dy * k;
    m2_x += dx * (xs[i] - mean_x);
    m2_y += dy * (ys[i] - mean_y);
    co += dx * (ys[i] - mean_y);
  }
  if (m2_x <= 0.0 || m2_y <= 0.0) {
    throw NumericalError("pearson undefined: zero variance");
  }
  return co / std::sqrt(m2_x * m2_y);
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("least_squares: need >= 2 paired points");
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(xs.size());
  mean_y /= static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (sxx <= 0.0) {
    throw NumericalError("least_squares undefined: zero x variance");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed + stream.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace aide
