// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion; the exit status is nonzero when any selected one fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "avc/analysis.h"
#include "avc/channel_model.h"
#include "avc/cli.h"
#include "avc/discrete_avc.h"
#include "avc/jammer.h"
#include "avc/montecarlo.h"
#include "avc/stats.h"
#include "oracles/oracles.h"

using namespace avc;

namespace {

// Pinned tolerances.
constexpr double kConstTol = 1e-6;
constexpr double kIdentityTol = 1e-12;
constexpr double kFvwTol = 1e-9;
constexpr double kExactZero = 1e-12;
constexpr double kDiscreteMatch = 1e-12;
constexpr double kLemma1Success = 0.95;
constexpr double kLemma4Violations = 0.05;
constexpr double kLemma5Tol = 1e-6;
constexpr double kHalfCapacityError = 0.10;
constexpr double kAboveCapacityError = 0.3;

// Encoder tolerance for the coded Monte Carlo criteria. The encoder-success
// check uses the 0.2 it names and the correlation-deviation check a tighter 0.02.
constexpr double kCodeTolerance = 0.05;
constexpr double kLemma4CodeTolerance = 0.02;

constexpr std::uint64_t kSeed = 20240601;

const SystemParams kUnit{1.0, 1.0, 1.0, 1.0, 100};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentOptions opts() {
  ExperimentOptions o;
  o.seed = kSeed;
  o.threads = 0;
  return o;
}

Outcome constants() {
  const auto rep = cli::constants_report(kUnit);
  const std::pair<const char*, double> expected[] = {
      {"alpha", 1.0 / 3.0},         {"codeword_power", 10.0 / 9.0}, {"capacity", 0.292481},
      {"binning_rate", 0.076002},   {"total_rate", 0.368483},       {"theta", 0.632456},
  };
  bool ok = true;
  double worst = 0.0;
  for (const auto& [key, want] : expected) {
    const double err = std::abs(rep[key].get<double>() - want);
    worst = std::max(worst, err);
    ok = ok && err <= kConstTol;
  }
  const double r1 = std::abs(rep["identity_total_rate_residual"].get<double>());
  const double r2 = std::abs(rep["identity_theta_residual"].get<double>());
  ok = ok && r1 <= kIdentityTol && r2 <= kIdentityTol;
  std::ostringstream os;
  os << "max |const - ref| " << fmt("%.2e", worst) << ", identity residuals " << fmt("%.1e", r1)
     << " " << fmt("%.1e", r2);
  return {ok, os.str()};
}

Outcome fvw_certificate() {
  cli::RunConfig c;
  c.experiment = cli::Experiment::kFvw;
  c.seed = kSeed;
  c.verify.resolution = 1000;
  c.verify.parameter_sets = 100;
  const auto r = cli::dispatch(c);
  std::size_t good = 0;
  double worst = 1e300;
  for (const auto& cert : r.summary["certificates"]) {
    const double gap = cert["min_value"].get<double>() - cert["theta"].get<double>();
    worst = std::min(worst, gap);
    if (gap >= -kFvwTol && cert["argmin_at_anchor"].get<bool>()) ++good;
  }
  const std::size_t total = r.summary["certificates"].size();
  return {total == 100 && good == total,
          std::to_string(good) + "/" + std::to_string(total) + " sets, min(min f - theta) " +
              fmt("%.2e", worst)};
}

Outcome lemma3() {
  const std::pair<std::size_t, double> points[] = {{50, 0.2}, {100, 0.3}, {100, 0.5}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [n, g] : points) {
    const auto rep = verify_lemma3({n}, {g}, 1000000, opts());
    const auto& row = rep.rows.at(0);
    ok = ok && row.frequency <= row.bound + 4.0 * row.standard_error;
    os << "(" << n << "," << g << "): " << fmt("%.3e", row.frequency) << " <= "
       << fmt("%.3e", row.bound) << "  ";
  }
  return {ok, os.str()};
}

Outcome lemma1() {
  const double rt = derive_constants(kUnit).binning_rate + 0.1;
  const auto rep = verify_lemma1(kUnit, {rt}, {50, 100, 150}, 0.2, 500, opts());
  const auto& last = rep.rows.back();
  std::ostringstream os;
  os << "success";
  for (const auto& row : rep.rows) os << " n=" << row.n << ":" << fmt("%.3f", row.success_rate);
  os << ", trend " << (rep.trend_ok ? "ok" : "violated");
  return {last.n == 150 && last.success_rate >= kLemma1Success && rep.trend_ok, os.str()};
}

Outcome lemma2() {
  const auto rep = verify_lemma2(kUnit, shipped_strategies(), {100, 400}, 1000, kCodeTolerance, opts());
  bool ok = true;
  std::ostringstream os;
  for (const auto& [name, trend_ok] : rep.trend) {
    if (!trend_ok) {
      ok = false;
      os << name << " no decrease; ";
    }
  }
  double aligned_max = 0.0;
  for (const auto& row : rep.rows) {
    if (row.strategy.rfind("state_aligned", 0) == 0) aligned_max = std::max(aligned_max, row.max_residual);
  }
  ok = ok && aligned_max <= kExactZero;
  os << rep.trend.size() << " strategies, aligned max residual " << fmt("%.1e", aligned_max);
  return {ok, os.str()};
}

Outcome lemma4() {
  const auto rep = verify_lemma4(kUnit, shipped_strategies(), {200}, 0.05, 2000, kLemma4CodeTolerance, opts());
  bool ok = true;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& row : rep.rows) {
    if (row.violation_rate > worst) {
      worst = row.violation_rate;
      worst_name = row.strategy;
    }
    ok = ok && row.violation_rate <= kLemma4Violations;
  }
  return {ok, "worst violation rate " + fmt("%.4f", worst) + " (" + worst_name + "), limit " +
                  fmt("%.2f", kLemma4Violations)};
}

Outcome lemma5() {
  const auto up = double_exp_limit(0.2, 0.1, 200);
  const auto down = double_exp_limit(0.1, 0.2, 200);
  return {up.final_value >= 1.0 - kLemma5Tol && down.final_value <= kLemma5Tol,
          "(0.2,0.1): " + fmt("%.9f", up.final_value) + ", (0.1,0.2): " + fmt("%.3e", down.final_value)};
}

SweepResult sweep(const std::vector<double>& fractions, const std::vector<std::size_t>& ns,
                  const std::vector<JammerStrategy>& strategies, std::size_t trials) {
  const double c = capacity(kUnit);
  std::vector<double> rates;
  for (double f : fractions) rates.push_back(f * c);
  return rate_sweep(kUnit, rates, ns, strategies, trials, BinningRule{}, kCodeTolerance, opts());
}

Outcome achievability() {
  const std::vector<std::size_t> ns{50, 100, 200};
  const auto res = sweep({0.5, 0.8}, ns, {make_strategy("sphere_uniform")}, 2000);
  bool ok = true;
  std::ostringstream os;
  for (std::size_t r = 0; r < 2; ++r) {
    os << (r == 0 ? "0.5C:" : " 0.8C:");
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const std::size_t k = r * ns.size() + i;
      os << " " << fmt("%.3f", res.rows[k].error_rate);
      if (i > 0 && !not_significantly_greater(res.outcomes[k - 1], res.outcomes[k], kSeed + k)) {
        ok = false;
        os << "(up)";
      }
    }
  }
  ok = ok && res.rows[2].error_rate <= kHalfCapacityError;
  return {ok, os.str()};
}

Outcome converse() {
  const auto res = sweep({1.5}, {100}, {make_strategy("sphere_uniform")}, 500);
  const auto& row = res.rows.at(0);
  return {row.error_rate >= kAboveCapacityError, "max error " + fmt("%.3f", row.error_rate) +
                                                     ", pooled " + fmt("%.3f", row.pooled_error_rate)};
}

Outcome state_futility() {
  const std::vector<JammerStrategy> strategies{
      make_strategy("sphere_uniform"),
      make_strategy("state_aligned", {{"sign", 1.0}}),
      make_strategy("state_aligned", {{"sign", -1.0}}),
      make_strategy("state_cancel_residual", {{"beta", 0.25}}),
      make_strategy("state_cancel_residual", {{"beta", 0.5}}),
      make_strategy("state_cancel_residual", {{"beta", 1.0}}),
  };
  const auto res = sweep({0.8}, {100}, strategies, 2000);
  const auto& base = res.rows.at(0);
  bool ok = true;
  std::ostringstream os;
  os << "sphere " << fmt("%.3f", base.error_rate);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    const double slack = base.ci.half_width() + row.ci.half_width();
    const bool good = row.error_rate <= base.error_rate + slack;
    ok = ok && good;
    os << ", " << strategies[i].name << " " << fmt("%.3f", row.error_rate) << (good ? "" : "(!)");
  }
  return {ok, os.str()};
}

oracle::DiscreteChannel as_oracle(const discrete::DiscreteAvcSpec& s) {
  oracle::DiscreteChannel ch{s.u_size(), s.x_size(), s.s_size(), s.j_size(), s.y_size(), s.state_law(), {}};
  for (std::size_t x = 0; x < s.x_size(); ++x)
    for (std::size_t st = 0; st < s.s_size(); ++st)
      for (std::size_t j = 0; j < s.j_size(); ++j)
        for (std::size_t y = 0; y < s.y_size(); ++y) ch.w.push_back(s.kernel(x, st, j, y));
  return ch;
}

Outcome discrete_capacity() {
  const auto dir = std::filesystem::path(AVC_SOURCE_DIR) / "configs" / "discrete";
  constexpr std::size_t kRes = 10;
  const double step = 1.0 / kRes;
  const std::pair<const char*, double> cases[] = {
      {"identity.json", 1.0}, {"xor_jammer.json", 0.0}, {"xor_state.json", 1.0}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [file, want] : cases) {
    const double v = discrete::solve_capacity(discrete::load_spec(dir / file), kRes, kRes).value;
    ok = ok && std::abs(v - want) <= step;
    os << file << " " << fmt("%.4f", v) << ", ";
  }

  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double ps = unit(rng);
    std::vector<double> w;
    for (int i = 0; i < 8; ++i) {
      const double a = unit(rng);
      w.push_back(a);
      w.push_back(1.0 - a);
    }
    const discrete::DiscreteAvcSpec spec(2, 2, 2, 2, 2, {ps, 1.0 - ps}, w);
    const double got = discrete::solve_capacity(spec, 5, 5).value;
    worst = std::max(worst, std::abs(got - oracle::max_min(as_oracle(spec), 5, 5)));
  }
  ok = ok && worst <= kDiscreteMatch;
  os << "20 random kernels max |solver - oracle| " << fmt("%.1e", worst);
  return {ok, os.str()};
}

Outcome reproducibility() {
  std::vector<cli::RunConfig> configs;
  {
    cli::RunConfig c;
    c.experiment = cli::Experiment::kSweep;
    c.sweep.rates = {0.5, 1.5};
    c.sweep.block_lengths = {20, 60};
    c.jammers = {{"sphere_uniform", {}}, {"state_cancel_residual", {{"beta", 0.5}}}};
    c.trials = 200;
    c.encode_tolerance = kCodeTolerance;
    configs.push_back(c);
  }
  {
    cli::RunConfig c;
    c.experiment = cli::Experiment::kLemma4;
    c.verify.block_lengths = {50};
    c.trials = 300;
    configs.push_back(c);
  }
  {
    cli::RunConfig c;
    c.experiment = cli::Experiment::kLemma3;
    c.verify.draws = 20000;
    configs.push_back(c);
  }
  {
    cli::RunConfig c;
    c.experiment = cli::Experiment::kDiscrete;
    c.discrete.spec = (std::filesystem::path(AVC_SOURCE_DIR) / "configs" / "discrete" / "xor_state.json").string();
    configs.push_back(c);
  }
  bool ok = true;
  std::ostringstream os;
  for (auto c : configs) {
    c.seed = kSeed;
    c.threads = 1;
    const auto a = cli::dispatch(c).csv;
    c.threads = 0;
    const auto b = cli::dispatch(c).csv;
    const bool same = a == b && !a.empty();
    ok = ok && same;
    os << cli::experiment_name(c.experiment) << (same ? " identical" : " DIFFERS") << " ("
       << cli::fnv1a_hex(a) << "), ";
  }
  std::string s = os.str();
  s.resize(s.size() - 2);
  return {ok, s};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "derived constants", constants},
      {2, "f(V,W) minimum certificate", fvw_certificate},
      {3, "sphere-cap tail bound", lemma3},
      {4, "encoder success", lemma1},
      {5, "jammer/codeword residual shrinks", lemma2},
      {6, "correlation deviation at n=200", lemma4},
      {7, "double-exponential limit", lemma5},
      {8, "achievability sweep", achievability},
      {9, "converse above capacity", converse},
      {10, "state knowledge does not help the jammer", state_futility},
      {11, "discrete grid capacity", discrete_capacity},
      {12, "byte-identical reruns", reproducibility},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %-42s %s [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
