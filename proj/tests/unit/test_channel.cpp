#include "doctest.h"

#include <cmath>
#include <string>

#include "avc/channel_model.h"
#include "avc/error.h"
#include "oracles/oracles.h"

using namespace avc;
namespace fz = oracle::frozen;

TEST_CASE("derived constants at unit parameters") {
  const auto k = derive_constants({1, 1, 1, 1, 10});
  CHECK(k.alpha == doctest::Approx(fz::kAlpha).epsilon(1e-14));
  CHECK(k.codeword_power == doctest::Approx(fz::kCodewordPower).epsilon(1e-14));
  CHECK(k.capacity == doctest::Approx(fz::kCapacity).epsilon(1e-14));
  CHECK(k.binning_rate == doctest::Approx(fz::kBinningRate).epsilon(1e-13));
  CHECK(k.total_rate == doctest::Approx(fz::kTotalRate).epsilon(1e-14));
  CHECK(k.theta == doctest::Approx(fz::kTheta).epsilon(1e-14));
}

TEST_CASE("rate identities hold across parameter space") {
  for (double p : {0.1, 1.0, 7.0}) {
    for (double lam : {0.0, 0.5, 3.0}) {
      for (double s2 : {0.01, 1.0, 4.0}) {
        for (double ss : {0.0, 1.0, 25.0}) {
          const auto k = derive_constants({p, lam, s2, ss, 1});
          CHECK(std::abs(k.total_rate - (k.capacity + k.binning_rate)) < 1e-12);
          CHECK(std::abs(-0.5 * std::log2(1.0 - k.theta * k.theta) - k.total_rate) < 1e-12);
          CHECK(k.alpha == doctest::Approx(p / (p + lam + s2)));
          CHECK(k.theta > 0.0);
          CHECK(k.theta < 1.0);
        }
      }
    }
  }
}

TEST_CASE("state-free channel has no binning rate") {
  const auto k = derive_constants({2, 1, 1, 0, 5});
  CHECK(k.binning_rate == 0.0);
  CHECK(k.codeword_power == 2.0);
  CHECK(k.total_rate == doctest::Approx(k.capacity));
}

TEST_CASE("validation lists every violated field") {
  const auto problems = validate({-1, -1, 0, -2, 0});
  CHECK(problems.size() == 5);
  CHECK(problems[0].find("power") != std::string::npos);
  CHECK(problems[1].find("jammer_power") != std::string::npos);
  CHECK(problems[2].find("noise_var") != std::string::npos);
  CHECK(problems[3].find("state_var") != std::string::npos);
  CHECK(problems[4].find("block_length") != std::string::npos);
  CHECK(validate({1, 0, 1, 0, 1}).empty());
  CHECK(validate({NAN, 1, 1, 1, 1}).size() == 1);
  CHECK_THROWS_AS(require_valid({1, -1, 1, 1, 1}), ValidationError);
}

TEST_CASE("state and noise samplers") {
  Rng rng(2);
  const SystemParams p{1, 1, 2.0, 0.5, 20000};
  const RealVec s = sample_state(p, rng);
  const RealVec z = sample_noise(p, rng);
  REQUIRE(s.size() == p.block_length);
  REQUIRE(z.size() == p.block_length);
  CHECK(norm_sq(s) / p.block_length == doctest::Approx(0.5).epsilon(0.05));
  CHECK(norm_sq(z) / p.block_length == doctest::Approx(2.0).epsilon(0.05));
  const RealVec none = sample_state({1, 1, 1, 0, 8}, rng);
  CHECK(norm_sq(none) == 0.0);
}

TEST_CASE("transmit is the sum of its inputs") {
  const RealVec y = transmit(RealVec{1, 2}, RealVec{3, 4}, RealVec{5, 6}, RealVec{7, 8});
  CHECK(y == RealVec{16, 20});
  CHECK_THROWS_AS(transmit(RealVec{1}, RealVec{1, 2}, RealVec{1}, RealVec{1}), DimensionError);
}
