#include "avc/stats.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "avc/error.h"
#include "avc/random.h"

namespace avc {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The endpoints are exactly 0 and 1 at k = 0 and k = n; rounding would
  // otherwise leave them a few ulps inside.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

BootstrapDiff paired_bootstrap_diff(std::span<const double> before, std::span<const double> after,
                                    std::uint64_t seed, std::size_t resamples, double confidence) {
  if (before.size() != after.size() || before.empty()) {
    throw DimensionError("paired_bootstrap_diff: samples must be nonempty and paired");
  }
  const std::size_t n = before.size();
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = after[i] - before[i];

  BootstrapDiff out;
  out.diff = mean(diffs);
  Rng rng(seed);
  std::vector<double> stats(resamples);
  for (double& s : stats) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += diffs[rng.uniform_index(n)];
    s = acc / static_cast<double>(n);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = 0.5 * (1.0 - confidence);
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1)));
    return stats[std::min(idx, resamples - 1)];
  };
  out.ci = {at(tail), at(1.0 - tail)};
  return out;
}

bool significantly_less(std::span<const double> before, std::span<const double> after,
                        std::uint64_t seed) {
  return paired_bootstrap_diff(before, after, seed).ci.hi < 0.0;
}

bool not_significantly_greater(std::span<const double> before, std::span<const double> after,
                               std::uint64_t seed) {
  return paired_bootstrap_diff(before, after, seed).ci.lo <= 0.0;
}

}  // namespace avc
