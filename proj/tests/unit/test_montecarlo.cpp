#include "doctest.h"

#include <cmath>
#include <memory>

#include <boost/math/distributions/chi_squared.hpp>

#include "avc/error.h"
#include "avc/montecarlo.h"

using namespace avc;

namespace {

CodeConfig code(std::size_t n, double rate, double binning, double tol = 0.1) {
  CodeConfig cfg;
  cfg.params = {1, 1, 1, 1, n};
  cfg.rate = rate;
  cfg.binning_rate = binning;
  cfg.encode_tolerance = tol;
  return cfg;
}

ExperimentOptions options(std::uint64_t seed, std::size_t threads = 1) {
  ExperimentOptions o;
  o.seed = seed;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("a trial replays exactly from its seed") {
  const auto cfg = code(60, 0.1, 0.2);
  const SampledCode sc(cfg);
  const auto strategy = make_strategy("gaussian_iid_truncated");
  Rng a(77), b(77);
  const auto ra = run_trial(sc, cfg, 2, strategy, a);
  const auto rb = run_trial(sc, cfg, 2, strategy, b);
  CHECK(ra.decoded == rb.decoded);
  CHECK(ra.error == rb.error);
  CHECK(ra.stats.s_sq == rb.stats.s_sq);
  CHECK(ra.stats.tau == rb.stats.tau);
  CHECK(ra.stats.j_z == rb.stats.j_z);
}

TEST_CASE("strategies in the same trial see the same state and noise") {
  const auto cfg = code(50, 0.1, 0.2);
  const SampledCode sc(cfg);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    const auto ra = run_trial(sc, cfg, 0, make_strategy("sphere_uniform"), a);
    const auto rb = run_trial(sc, cfg, 0, make_strategy("state_aligned"), b);
    CHECK(ra.stats.s_sq == rb.stats.s_sq);
    CHECK(ra.stats.z_sq == rb.stats.z_sq);
    CHECK(ra.stats.s_z == rb.stats.s_z);
    CHECK(ra.encode_ok == rb.encode_ok);
    CHECK(ra.stats.x_sq == rb.stats.x_sq);
  }
}

TEST_CASE("trial statistics obey their definitions") {
  const auto cfg = code(40, 0.1, 0.25, 0.2);
  const Codebook cb = build_codebook(cfg, 4);
  Rng rng(3);
  for (const auto& strategy : shipped_strategies()) {
    for (int t = 0; t < 30; ++t) {
      const auto r = run_trial(cb, cfg, t % cb.bins(), strategy, rng);
      CHECK(r.stats.x_sq <= cfg.params.power * (1 + 1e-12));
      CHECK(r.stats.j_sq_raw <= cfg.params.jammer_power * (1 + 1e-12));
      CHECK(r.stats.w <= cfg.params.jammer_power);
      CHECK(std::abs(r.stats.v) <= 1.0 + 1e-12);
      CHECK(r.error == (r.decoded != r.m));
      if (r.encode_ok) {
        REQUIRE(r.stats.tau.has_value());
        CHECK(std::abs(*r.stats.tau) <= 1.0 + 1e-12);
      } else {
        CHECK_FALSE(r.stats.tau.has_value());
        CHECK(r.stats.x_sq == 0.0);
      }
      if (r.encode_ok && strategy.name.rfind("state_aligned", 0) == 0) {
        CHECK(*r.stats.residual() <= 1e-12);
      }
    }
  }
}

TEST_CASE("message subsets") {
  ExperimentOptions o;
  o.message_subset = 4;
  CHECK(message_subset(16, o) == std::vector<std::uint64_t>{0, 4, 8, 12});
  CHECK(message_subset(2, o) == std::vector<std::uint64_t>{0, 1});
  o.all_messages = true;
  CHECK(message_subset(5, o).size() == 5);
  CHECK_THROWS_AS(message_subset(std::exp2(60.0), o), ResourceError);
}

TEST_CASE("binning rule") {
  const SystemParams p{1, 1, 1, 1, 1};
  const auto k = derive_constants(p);
  BinningRule rule;
  CHECK(binning_rate_for(p, 0.1, rule) == doctest::Approx(k.binning_rate + 0.5 * (k.capacity - 0.1)));
  CHECK(binning_rate_for(p, 1.0, rule) == doctest::Approx(k.binning_rate + 0.05));
  rule.kind = BinningRule::Kind::kFixed;
  rule.value = 0.3;
  CHECK(binning_rate_for(p, 0.1, rule) == 0.3);
}

TEST_CASE("max-error estimate summarizes its messages") {
  const auto cfg = code(40, 0.1, 0.2);
  const auto row = estimate_max_error(cfg, make_strategy("sphere_uniform"), 200, options(1));
  CHECK(row.messages == 8);
  CHECK(row.trials == 200);
  CHECK(row.error_rate >= row.pooled_error_rate);
  CHECK(row.ci.lo <= row.error_rate);
  CHECK(row.ci.hi >= row.error_rate);
  CHECK(row.worst_errors == static_cast<std::uint64_t>(std::llround(row.error_rate * 200)));
  CHECK_THROWS_AS(estimate_max_error(cfg, make_strategy("sphere_uniform"), 50, options(1)),
                  ValidationError);
}

TEST_CASE("a frozen codebook gives the same estimate as the explicit backend on it") {
  const auto cfg = code(16, 0.25, 0.125, 0.3);
  const Codebook cb = build_codebook(cfg, 9);
  const auto a = estimate_max_error(cb, cfg, make_strategy("sphere_uniform"), 100, options(2));
  const auto b = estimate_max_error(cb, cfg, make_strategy("sphere_uniform"), 100, options(2));
  CHECK(a.pooled_errors == b.pooled_errors);
  CHECK(a.backend == "explicit");
}

TEST_CASE("sweep CSV is byte-identical across runs and thread counts") {
  const SystemParams p{1, 1, 1, 1, 1};
  const std::vector<JammerStrategy> strategies{make_strategy("sphere_uniform"),
                                               make_strategy("state_aligned")};
  const auto one = to_csv(rate_sweep(p, {0.1, 0.2}, {20, 60}, strategies, 100, {}, 0.1, options(5, 1)));
  const auto again = to_csv(rate_sweep(p, {0.1, 0.2}, {20, 60}, strategies, 100, {}, 0.1, options(5, 1)));
  const auto threaded = to_csv(rate_sweep(p, {0.1, 0.2}, {20, 60}, strategies, 100, {}, 0.1, options(5, 3)));
  const auto other = to_csv(rate_sweep(p, {0.1, 0.2}, {20, 60}, strategies, 100, {}, 0.1, options(6, 1)));
  CHECK(one == again);
  CHECK(one == threaded);
  CHECK(one != other);
  CHECK(one.rfind(sweep_csv_header(), 0) == 0);
  CHECK(one.rfind("# avc sweep csv v1", 0) == 0);
  CHECK_THROWS_AS(rate_sweep(p, {}, {20}, strategies, 100, {}, 0.1, options(1)), ValidationError);
}

TEST_CASE("encoding-success experiment edge cases") {
  // No state: every codeword qualifies.
  const auto none = verify_lemma1({1, 1, 1, 0, 1}, {0.1}, {30}, 0.2, 100, options(1));
  CHECK(none.rows[0].success_rate == 1.0);
  // One word per bin and a tiny window: almost never succeeds.
  const auto tight = verify_lemma1({1, 1, 1, 1, 1}, {0.0}, {60}, 1e-6, 200, options(1));
  CHECK(tight.rows[0].success_rate < 0.02);
}

TEST_CASE("aligned jammer has zero residual") {
  const auto rep = verify_lemma2({1, 1, 1, 1, 1}, {make_strategy("state_aligned")}, {50, 200}, 100,
                                 0.2, options(3));
  for (const auto& row : rep.rows) CHECK(row.max_residual <= 1e-12);
  REQUIRE(rep.trend.size() == 1);
  CHECK(rep.trend[0].second);
}

TEST_CASE("sphere-cap experiment at a small draw count") {
  const auto rep = verify_lemma3({30}, {0.3, 0.5}, 20000, options(4));
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.all_ok);
  for (const auto& r : rep.rows) CHECK(r.frequency <= r.bound);
}

TEST_CASE("energy deviation events follow the chi-square law and shrink with n") {
  // E4: | ||Z||^2 / n - sigma^2 | > delta and E5: | ||S||^2 / n - sigma_S^2 | > delta,
  // with both squared norms distributed as chi^2_n at unit variance.
  const SystemParams p{1, 1, 1, 1, 1};
  const double delta = 0.1;
  constexpr std::size_t trials = 3000;
  double previous_e4 = 1.0, previous_e5 = 1.0;
  for (std::size_t n : {100u, 400u}) {
    const auto rep = verify_lemma4(p, {make_strategy("sphere_uniform")}, {n}, delta, trials, 0.05,
                                   options(n));
    boost::math::chi_squared chi(static_cast<double>(n));
    const double exact = boost::math::cdf(chi, n * (1 - delta)) +
                         boost::math::cdf(boost::math::complement(chi, n * (1 + delta)));
    const double se = std::sqrt(exact * (1 - exact) / trials);
    const auto& ev = rep.rows[0].events;
    CHECK(std::abs(ev.e4 - exact) < 4 * se);
    CHECK(std::abs(ev.e5 - exact) < 4 * se);
    CHECK(ev.e4 < previous_e4);
    CHECK(ev.e5 < previous_e5);
    previous_e4 = ev.e4;
    previous_e5 = ev.e5;
  }
  CHECK(event_frequencies({}, p, delta).union_1_6 == 0.0);
}
