#include "avc/random.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace avc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::span<const std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : path) h = splitmix64(h ^ splitmix64(c + 1));
  return h;
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return derive_seed(master, std::span<const std::uint64_t>(path.begin(), path.size()));
}

Rng Rng::derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(master, path));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  // Rejection on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double Rng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gaussian_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(phase);
  has_cached_ = true;
  return r * std::cos(phase);
}

}  // namespace avc
