#include "doctest.h"

#include <cmath>
#include <set>

#include "avc/error.h"
#include "avc/jammer.h"

using namespace avc;

TEST_CASE("every shipped strategy respects the power ball on every draw") {
  Rng rng(10);
  for (std::size_t n : {1u, 2u, 17u, 200u}) {
    for (double lam : {0.0, 0.3, 1.0, 4.0}) {
      const SystemParams p{1.0, lam, 1.0, 1.0, n};
      for (const auto& strategy : shipped_strategies()) {
        for (int t = 0; t < 50; ++t) {
          RealVec s = sample_state(p, rng);
          if (t == 0) s.assign(n, 0.0);
          const RealVec j = strategy(0, s, p, rng);
          REQUIRE(j.size() == n);
          CHECK(all_finite(j));
          CHECK(norm_sq(j) <= n * lam * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("shipped strategies have distinct names and round-trip through the factory") {
  std::set<std::string> names;
  for (const auto& s : shipped_strategies()) names.insert(s.name);
  CHECK(names.size() == shipped_strategies().size());
  CHECK(names.count("sphere_uniform") == 1);
  CHECK(names.count("state_aligned(+)") == 1);
  CHECK(names.count("state_aligned(-)") == 1);
  CHECK(names.count("state_cancel_residual(beta=0.25)") == 1);
  CHECK(make_strategy("state_cancel_residual", {{"beta", 1.0}}).name == "state_cancel_residual(beta=1)");
  CHECK(strategy_names().size() == 4);
}

TEST_CASE("factory rejects unknown names and parameters") {
  CHECK_THROWS_AS(make_strategy("laser"), ValidationError);
  CHECK_THROWS_AS(make_strategy("sphere_uniform", {{"beta", 0.1}}), ValidationError);
  CHECK_THROWS_AS(make_strategy("state_cancel_residual", {{"beta", 1.5}}), ValidationError);
  CHECK_THROWS_AS(make_strategy("state_aligned", {{"sign", 0.0}}), ValidationError);
}

TEST_CASE("state-aligned jammer is a full-power multiple of the state") {
  Rng rng(1);
  const SystemParams p{1, 2, 1, 1, 30};
  const RealVec s = sample_state(p, rng);
  for (int sign : {1, -1}) {
    const RealVec j = jam_state_aligned(0, s, p, rng, sign);
    CHECK(norm_sq(j) == doctest::Approx(60.0));
    CHECK(inner(j, s) / (norm(j) * norm(s)) == doctest::Approx(sign));
  }
  CHECK(norm_sq(jam_state_aligned(0, RealVec(30, 0.0), p, rng, 1)) == 0.0);
}

TEST_CASE("cancel-residual jammer splits its budget as specified") {
  Rng rng(2);
  const SystemParams p{1, 1, 1, 1, 100};
  const double alpha = derive_constants(p).alpha;
  const RealVec s = sample_state(p, rng);
  const double s_sq = norm_sq(s);
  for (double beta : {0.0, 0.1, 0.25, 1.0}) {
    const RealVec j = jam_state_cancel_residual(0, s, p, rng, beta);
    const double c = std::min(std::sqrt(beta * 100.0 / s_sq), 1.0 - alpha);
    // Component along s is exactly -c s.
    CHECK(inner(j, s) / s_sq == doctest::Approx(-c).epsilon(1e-9));
    CHECK(norm_sq(j) == doctest::Approx(100.0).epsilon(1e-9));
  }
}

TEST_CASE("gaussian jammer is clipped only when it leaves the ball") {
  Rng rng(3);
  const SystemParams p{1, 1, 1, 1, 400};
  int inside = 0;
  for (int t = 0; t < 200; ++t) {
    const RealVec j = jam_gaussian_iid_truncated(0, RealVec(400, 0.0), p, rng);
    const double e = norm_sq(j);
    CHECK(e <= 400 * (1 + 1e-12));
    inside += e < 400 * (1 - 1e-9) ? 1 : 0;
  }
  CHECK(inside > 60);
  CHECK(inside < 140);
}

TEST_CASE("wrapper rejects over-budget generators") {
  JammerStrategy bad{"bad", [](std::uint64_t, VecView s, const SystemParams& p, Rng&) {
                       return RealVec(s.size(), std::sqrt(p.jammer_power) * 1.01);
                     }};
  Rng rng(1);
  const SystemParams p{1, 1, 1, 1, 10};
  CHECK_THROWS_AS(bad(0, RealVec(10, 0.0), p, rng), DomainError);
  JammerStrategy short_out{"short", [](std::uint64_t, VecView, const SystemParams&, Rng&) {
                             return RealVec(3, 0.0);
                           }};
  CHECK_THROWS_AS(short_out(0, RealVec(10, 0.0), p, rng), DimensionError);
}
