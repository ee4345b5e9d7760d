#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aide {

// Quantile of a sample by linear interpolation between order statistics
// (the widespread "type 7" rule: h = (n-1)q). `sorted` must be ascending
// and non-empty; q in [0, 1].
double quantile_type7(std::span<const double> sorted, double q);

// Product-moment correlation, accumulated in a single pass with running
// means. Requires >= 2 points and nonzero variance in both coordinates.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Ordinary least squares fit ys ~ slope * xs + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

// In-place Fisher-Yates shuffle driven by an explicit 64-bit generator so
// the permutation does not depend on the standard library's distribution
// internals.
template <typename T, typename Rng>
void seeded_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

// Stateless mixing of a master seed with a stream tag, used to derive
// independent sub-streams from the single recorded seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace aide
