#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace avc {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

double mean(std::span<const double> xs);

// Percentile-bootstrap interval for mean(after) - mean(before), resampling
// index pairs (before[i], after[i]). Both spans must share a length.
struct BootstrapDiff {
  double diff = 0.0;
  Interval ci;
};

BootstrapDiff paired_bootstrap_diff(std::span<const double> before, std::span<const double> after,
                                    std::uint64_t seed, std::size_t resamples = 2000,
                                    double confidence = 0.95);

// mean(after) < mean(before) with the whole interval below zero.
bool significantly_less(std::span<const double> before, std::span<const double> after,
                        std::uint64_t seed);

// The interval for mean(after) - mean(before) reaches down to zero, i.e. no
// significant increase.
bool not_significantly_greater(std::span<const double> before, std::span<const double> after,
                               std::uint64_t seed);

}  // namespace avc
