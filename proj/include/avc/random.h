#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace avc {

// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed-reproducible random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform doubles take the top 53 bits of one engine word, and
// Gaussian deviates use the Box-Muller transform (two uniforms per pair, the
// second deviate cached). Nothing here depends on the implementation-defined
// std::*_distribution classes, so a (seed, path) pair replays bit-exactly on
// any conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  // Stream splitting rule: the child seed is obtained by folding each path
  // component into the master seed with splitmix64,
  //   h = splitmix64(master); for c in path: h = splitmix64(h ^ splitmix64(c + 1)).
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path);
  static std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);
  static std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> path);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform();

  // Uniform on (0, 1), never returns 0.
  double uniform_open();

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Standard normal deviate.
  double gaussian();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace avc
