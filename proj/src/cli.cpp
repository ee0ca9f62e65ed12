#include "avc/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "avc/analysis.h"
#include "avc/discrete_avc.h"
#include "avc/montecarlo.h"
#include "avc/random.h"

#ifndef AVC_VERSION
#define AVC_VERSION "dev"
#endif

namespace avc::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::kSimulate, "simulate"},      {Experiment::kSweep, "sweep"},
    {Experiment::kLemma1, "verify-lemma1"},   {Experiment::kLemma2, "verify-lemma2"},
    {Experiment::kLemma3, "verify-lemma3"},   {Experiment::kLemma4, "verify-lemma4"},
    {Experiment::kLemma5, "verify-lemma5"},   {Experiment::kFvw, "verify-fvw"},
    {Experiment::kDiscrete, "discrete"},
};

constexpr std::uint64_t kTagLemma3Point = 31;
constexpr std::uint64_t kTagFvwParams = 41;

// ---- typed reads with error collection ----

bool convert(const json& j, double& out) {
  if (!j.is_number()) return false;
  out = j.get<double>();
  return true;
}

bool convert(const json& j, std::uint64_t& out) {
  if (!j.is_number_unsigned()) return false;
  out = j.get<std::uint64_t>();
  return true;
}

bool convert(const json& j, bool& out) {
  if (!j.is_boolean()) return false;
  out = j.get<bool>();
  return true;
}

bool convert(const json& j, std::string& out) {
  if (!j.is_string()) return false;
  out = j.get<std::string>();
  return true;
}

bool convert(const json& j, std::optional<double>& out) {
  if (j.is_null()) {
    out.reset();
    return true;
  }
  double v = 0.0;
  if (!convert(j, v)) return false;
  out = v;
  return true;
}

template <typename A, typename B>
bool convert(const json& j, std::pair<A, B>& out) {
  if (!j.is_array() || j.size() != 2) return false;
  return convert(j[0], out.first) && convert(j[1], out.second);
}

template <typename T>
bool convert(const json& j, std::vector<T>& out) {
  if (!j.is_array()) return false;
  std::vector<T> tmp(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!convert(j[i], tmp[i])) return false;
  }
  out = std::move(tmp);
  return true;
}

template <typename T>
const char* type_label() {
  if constexpr (std::is_same_v<T, double>) return "a number";
  else if constexpr (std::is_same_v<T, std::uint64_t>) return "a non-negative integer";
  else if constexpr (std::is_same_v<T, bool>) return "true or false";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_same_v<T, std::optional<double>>) return "a number or null";
  else return "an array of the documented shape";
}

class Section {
 public:
  Section(const json& doc, std::string prefix, std::vector<std::string>& errors)
      : doc_(&doc), prefix_(std::move(prefix)), errors_(errors) {
    if (!doc.is_object()) {
      errors_.push_back(label("") + "expected an object");
      doc_ = nullptr;
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (doc_ == nullptr || !doc_->contains(key)) return;
    if constexpr (std::is_same_v<T, std::size_t> && !std::is_same_v<std::size_t, std::uint64_t>) {
      std::uint64_t v = out;
      read_into(key, v);
      out = static_cast<std::size_t>(v);
    } else {
      read_into(key, out);
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (doc_ == nullptr || !doc_->contains(key)) return nullptr;
    return &(*doc_)[key];
  }

  void finish() {
    if (doc_ == nullptr) return;
    for (const auto& [key, value] : doc_->items()) {
      if (!seen_.count(key)) errors_.push_back(label(key) + "unknown key");
    }
  }

  std::string label(const std::string& key) const {
    std::string path = prefix_;
    if (!key.empty()) path += path.empty() ? key : "." + key;
    return path.empty() ? "" : path + ": ";
  }

 private:
  template <typename T>
  void read_into(const char* key, T& out) {
    if (!convert((*doc_)[key], out)) errors_.push_back(label(key) + "expected " + type_label<T>());
  }

  const json* doc_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void read_jammers(const json& j, std::vector<JammerSpec>& out, std::vector<std::string>& errors) {
  if (!j.is_array()) {
    errors.push_back("jammers: expected an array");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "jammers[" + std::to_string(i) + "]";
    JammerSpec spec;
    if (j[i].is_string()) {
      spec.name = j[i].get<std::string>();
    } else if (j[i].is_object()) {
      Section s(j[i], where, errors);
      s.read("name", spec.name);
      if (const json* p = s.child("params")) {
        if (!p->is_object()) {
          errors.push_back(where + ".params: expected an object");
        } else {
          for (const auto& [key, value] : p->items()) {
            if (!value.is_number()) {
              errors.push_back(where + ".params." + key + ": expected a number");
            } else {
              spec.params[key] = value.get<double>();
            }
          }
        }
      }
      s.finish();
    } else {
      errors.push_back(where + ": expected a name or an object");
      continue;
    }
    out.push_back(std::move(spec));
  }
}

void prefixed(std::vector<std::string>& errors, const std::string& prefix,
              const std::vector<std::string>& problems) {
  for (const auto& p : problems) errors.push_back(prefix + p);
}

void validate_config(const RunConfig& c, std::vector<std::string>& errors,
                     std::vector<std::string>& warnings) {
  const auto param_problems = validate(c.params);
  prefixed(errors, "params.", param_problems);

  CodeConfig code;
  code.rate = c.rate;
  code.binning_rate = c.binning_rate.value_or(0.0);
  code.encode_tolerance = c.encode_tolerance;
  prefixed(errors, "code.", validate(code));
  if (!(c.binning_slack > 0.0) || !std::isfinite(c.binning_slack)) {
    errors.push_back("code.binning_slack: must be finite and > 0");
  }
  if (c.max_codewords < 1) errors.push_back("code.max_codewords: must be >= 1");
  if (c.max_bytes < 1) errors.push_back("code.max_bytes: must be >= 1");
  if (c.message_subset < 1) errors.push_back("code.message_subset: must be >= 1");
  if (c.codebook_refresh < 1) errors.push_back("code.codebook_refresh: must be >= 1");

  const bool max_error_experiment =
      c.experiment == Experiment::kSimulate || c.experiment == Experiment::kSweep;
  if (c.trials < 1) {
    errors.push_back("trials: must be >= 1");
  } else if (max_error_experiment && c.trials < 100) {
    errors.push_back("trials: must be >= 100 per message for error-rate estimates");
  }

  for (std::size_t i = 0; i < c.jammers.size(); ++i) {
    try {
      make_strategy(c.jammers[i].name, c.jammers[i].params);
    } catch (const Error& e) {
      errors.push_back("jammers[" + std::to_string(i) + "]: " + e.what());
    }
  }

  if (c.sweep.rates.empty()) errors.push_back("sweep.rates: must not be empty");
  for (double r : c.sweep.rates) {
    if (!std::isfinite(r) || r < 0.0) errors.push_back("sweep.rates: entries must be finite and >= 0");
  }
  if (c.sweep.block_lengths.empty()) errors.push_back("sweep.block_lengths: must not be empty");
  for (auto n : c.sweep.block_lengths) {
    if (n < 1) errors.push_back("sweep.block_lengths: entries must be >= 1");
  }

  const auto& v = c.verify;
  for (auto n : v.block_lengths) {
    if (n < 2) errors.push_back("verify.block_lengths: entries must be >= 2");
  }
  for (double r : v.binning_rates) {
    if (!std::isfinite(r) || r < 0.0) {
      errors.push_back("verify.binning_rates: entries must be finite and >= 0");
    }
  }
  if (!(v.delta > 0.0) || !std::isfinite(v.delta)) errors.push_back("verify.delta: must be finite and > 0");
  if (v.draws < 1) errors.push_back("verify.draws: must be >= 1");
  for (const auto& [n, gamma] : v.cap_points) {
    try {
      sphere_cap_bound(n, gamma);
    } catch (const Error& e) {
      errors.push_back(std::string("verify.cap_points: ") + e.what());
    }
  }
  if (v.resolution < 100) errors.push_back("verify.resolution: must be >= 100");
  for (const auto& [a1, a2] : v.exponent_pairs) {
    if (!(a1 > 0.0) || !(a2 > 0.0) || a1 == a2) {
      errors.push_back("verify.exponent_pairs: need a1 > 0, a2 > 0 and a1 != a2");
    }
  }
  if (v.n_max < 1) errors.push_back("verify.n_max: must be >= 1");

  if (c.experiment == Experiment::kDiscrete && c.discrete.spec.empty()) {
    errors.push_back("discrete.spec: required for the discrete experiment");
  }
  if (c.discrete.outer_resolution < 5) errors.push_back("discrete.outer_resolution: must be >= 5");
  if (c.discrete.inner_resolution < 5) errors.push_back("discrete.inner_resolution: must be >= 5");

  if (param_problems.empty()) {
    const auto k = derive_constants(c.params);
    if (c.binning_rate && *c.binning_rate < k.binning_rate) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "code.binning_rate = %.6g is below C~ = %.6g: the encoder will fail to find "
                    "a codeword with probability tending to 1 (see verify --target lemma1)",
                    *c.binning_rate, k.binning_rate);
      warnings.emplace_back(buf);
    }
    if (c.experiment == Experiment::kSimulate && c.rate >= k.capacity) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "code.rate = %.6g is at or above C = %.6g: errors are expected", c.rate,
                    k.capacity);
      warnings.emplace_back(buf);
    }
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ExperimentOptions options_for(const RunConfig& c) {
  ExperimentOptions o;
  o.seed = c.seed;
  o.threads = c.threads;
  o.backend = c.backend;
  o.codebook_refresh = c.codebook_refresh;
  o.message_subset = c.message_subset;
  o.all_messages = c.all_messages;
  return o;
}

std::vector<JammerStrategy> strategies_for(const RunConfig& c, bool verification) {
  std::vector<JammerStrategy> out;
  if (c.jammers.empty()) {
    if (verification) return shipped_strategies();
    out.push_back(make_strategy("sphere_uniform"));
    return out;
  }
  for (const auto& j : c.jammers) out.push_back(make_strategy(j.name, j.params));
  return out;
}

BinningRule binning_rule_for(const RunConfig& c) {
  BinningRule rule;
  rule.slack = c.binning_slack;
  if (c.binning_rate) {
    rule.kind = BinningRule::Kind::kFixed;
    rule.value = *c.binning_rate;
  }
  return rule;
}

json row_json(const SweepRow& r) {
  return {{"rate", r.rate},
          {"binning_rate", r.binning_rate},
          {"n", r.n},
          {"jammer", r.jammer},
          {"backend", r.backend},
          {"messages", r.messages},
          {"trials_per_message", r.trials},
          {"max_error_rate", r.error_rate},
          {"max_error_ci", {r.ci.lo, r.ci.hi}},
          {"pooled_error_rate", r.pooled_error_rate},
          {"pooled_ci", {r.pooled_ci.lo, r.pooled_ci.hi}},
          {"encode_failure_rate", r.encode_failure_rate}};
}

void log_line(const DispatchContext& ctx, const std::string& line) {
  if (ctx.log != nullptr) *ctx.log << line << '\n';
}

DispatchResult run_simulate(const RunConfig& c, const DispatchContext& ctx) {
  CodeConfig code;
  code.params = c.params;
  code.rate = c.rate;
  code.binning_rate = binning_rate_for(c.params, c.rate, binning_rule_for(c));
  code.encode_tolerance = c.encode_tolerance;
  code.max_codewords = c.max_codewords;
  code.max_bytes = c.max_bytes;
  const auto opts = options_for(c);

  SweepResult result;
  DispatchResult out;
  out.summary["rows"] = json::array();
  for (const auto& strategy : strategies_for(c, false)) {
    log_line(ctx, "simulate: " + strategy.name);
    result.rows.push_back(estimate_max_error(code, strategy, c.trials, opts));
    out.summary["rows"].push_back(row_json(result.rows.back()));
  }
  out.csv = to_csv(result);
  return out;
}

DispatchResult run_sweep(const RunConfig& c, const DispatchContext& ctx) {
  std::vector<double> rates = c.sweep.rates;
  if (c.sweep.rates_in_capacity_units) {
    const double cap = capacity(c.params);
    for (double& r : rates) r *= cap;
  }
  log_line(ctx, "sweep: " + std::to_string(rates.size() * c.sweep.block_lengths.size()) + " cells");
  const auto result = rate_sweep(c.params, rates, c.sweep.block_lengths, strategies_for(c, false),
                                 c.trials, binning_rule_for(c), c.encode_tolerance, options_for(c));
  DispatchResult out;
  out.summary["rows"] = json::array();
  for (const auto& r : result.rows) out.summary["rows"].push_back(row_json(r));
  out.csv = to_csv(result);
  return out;
}

DispatchResult run_lemma1(const RunConfig& c, const DispatchContext& ctx) {
  const auto k = derive_constants(c.params);
  auto rates = c.verify.binning_rates;
  if (rates.empty()) rates = {k.binning_rate + 0.1};
  auto ns = c.verify.block_lengths;
  if (ns.empty()) ns = {50, 100, 150};
  log_line(ctx, "lemma1: encoder covering");
  const auto rep = verify_lemma1(c.params, rates, ns, c.encode_tolerance, c.trials, options_for(c));

  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc lemma1 csv v1\n"
      << "binning_rate,n,backend,trials,successes,success_rate,ci_lo,ci_hi\n";
  json rows = json::array();
  for (const auto& r : rep.rows) {
    csv << num(r.binning_rate) << ',' << r.n << ',' << r.backend << ',' << r.trials << ','
        << r.successes << ',' << num(r.success_rate) << ',' << num(r.ci.lo) << ','
        << num(r.ci.hi) << '\n';
    rows.push_back({{"binning_rate", r.binning_rate},
                    {"n", r.n},
                    {"success_rate", r.success_rate},
                    {"ci", {r.ci.lo, r.ci.hi}}});
  }
  out.csv = csv.str();
  out.summary = {{"binning_threshold", rep.binning_threshold},
                 {"encode_tolerance", rep.encode_tolerance},
                 {"trend_ok", rep.trend_ok},
                 {"rows", rows}};
  return out;
}

json trend_json(const std::vector<std::pair<std::string, bool>>& trend) {
  json t = json::object();
  for (const auto& [name, ok] : trend) t[name] = ok;
  return t;
}

DispatchResult run_lemma2(const RunConfig& c, const DispatchContext& ctx) {
  auto ns = c.verify.block_lengths;
  if (ns.empty()) ns = {100, 400};
  log_line(ctx, "lemma2: jammer/codeword residual");
  const auto rep = verify_lemma2(c.params, strategies_for(c, true), ns, c.trials,
                                 c.encode_tolerance, options_for(c));
  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc lemma2 csv v1\n"
      << "strategy,n,trials,mean_residual,max_residual,freq_above_delta,scaling_bound\n";
  json rows = json::array();
  for (const auto& r : rep.rows) {
    csv << r.strategy << ',' << r.n << ',' << r.trials << ',' << num(r.mean_residual) << ','
        << num(r.max_residual) << ',' << num(r.freq_above) << ',' << num(r.scaling_bound) << '\n';
    rows.push_back({{"strategy", r.strategy},
                    {"n", r.n},
                    {"mean_residual", r.mean_residual},
                    {"scaling_bound", r.scaling_bound}});
  }
  out.csv = csv.str();
  out.summary = {{"delta", rep.delta}, {"decreasing", trend_json(rep.trend)}, {"rows", rows}};
  return out;
}

DispatchResult run_lemma3(const RunConfig& c, const DispatchContext& ctx) {
  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc lemma3 csv v1\n"
      << "n,gamma,draws,hits,frequency,bound,standard_error,ok\n";
  json rows = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < c.verify.cap_points.size(); ++i) {
    const auto [n, gamma] = c.verify.cap_points[i];
    log_line(ctx, "lemma3: n=" + std::to_string(n) + " gamma=" + num(gamma));
    auto opts = options_for(c);
    opts.seed = Rng::derive_seed(c.seed, {kTagLemma3Point, i});
    const auto rep = verify_lemma3({n}, {gamma}, c.verify.draws, opts);
    for (const auto& r : rep.rows) {
      csv << r.n << ',' << num(r.gamma) << ',' << r.draws << ',' << r.hits << ','
          << num(r.frequency) << ',' << num(r.bound) << ',' << num(r.standard_error) << ','
          << (r.ok ? 1 : 0) << '\n';
      rows.push_back({{"n", r.n},
                      {"gamma", r.gamma},
                      {"frequency", r.frequency},
                      {"bound", r.bound},
                      {"ok", r.ok}});
    }
    all_ok = all_ok && rep.all_ok;
  }
  out.csv = csv.str();
  out.summary = {{"all_ok", all_ok}, {"rows", rows}};
  return out;
}

DispatchResult run_lemma4(const RunConfig& c, const DispatchContext& ctx) {
  auto ns = c.verify.block_lengths;
  if (ns.empty()) ns = {200};
  log_line(ctx, "lemma4: correlation margin");
  const auto rep = verify_lemma4(c.params, strategies_for(c, true), ns, c.verify.delta, c.trials,
                                 c.encode_tolerance, options_for(c));
  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc lemma4 csv v1\n"
      << "strategy,n,trials,violations,encode_failures,violation_rate,ci_lo,ci_hi,mean_tau,"
         "fvw_fraction,e0,e1,e2,e3,e4,e5,e6,union_1_6\n";
  json rows = json::array();
  for (const auto& r : rep.rows) {
    const auto& e = r.events;
    csv << r.strategy << ',' << r.n << ',' << r.trials << ',' << r.violations << ','
        << r.encode_failures << ',' << num(r.violation_rate) << ',' << num(r.ci.lo) << ','
        << num(r.ci.hi) << ',' << num(r.mean_tau) << ',' << num(r.fvw_fraction) << ','
        << num(e.e0) << ',' << num(e.e1) << ',' << num(e.e2) << ',' << num(e.e3) << ','
        << num(e.e4) << ',' << num(e.e5) << ',' << num(e.e6) << ',' << num(e.union_1_6) << '\n';
    rows.push_back({{"strategy", r.strategy},
                    {"n", r.n},
                    {"violation_rate", r.violation_rate},
                    {"ci", {r.ci.lo, r.ci.hi}},
                    {"mean_tau", r.mean_tau}});
  }
  out.csv = csv.str();
  out.summary = {{"theta", rep.theta},
                 {"delta", rep.delta},
                 {"not_increasing", trend_json(rep.trend)},
                 {"rows", rows}};
  return out;
}

DispatchResult run_lemma5(const RunConfig& c, const DispatchContext&) {
  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc lemma5 csv v1\n"
      << "a1,a2,n,value\n";
  json rows = json::array();
  for (const auto& [a1, a2] : c.verify.exponent_pairs) {
    const auto rep = double_exp_limit(a1, a2, c.verify.n_max);
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
      csv << num(a1) << ',' << num(a2) << ',' << i + 1 << ',' << num(rep.values[i]) << '\n';
    }
    rows.push_back({{"a1", a1},
                    {"a2", a2},
                    {"n", c.verify.n_max},
                    {"value", rep.final_value},
                    {"limit", rep.limit},
                    {"converging", rep.converging}});
  }
  out.csv = csv.str();
  out.summary = {{"rows", rows}};
  return out;
}

SystemParams random_params(std::uint64_t seed, std::size_t index) {
  // Log-uniform on [0.1, 10] for each variance, state variance included.
  Rng rng(Rng::derive_seed(seed, {kTagFvwParams, index}));
  auto draw = [&] { return std::pow(10.0, -1.0 + 2.0 * rng.uniform()); };
  SystemParams p;
  p.power = draw();
  p.jammer_power = draw();
  p.noise_var = draw();
  p.state_var = draw();
  p.block_length = 1;
  return p;
}

DispatchResult run_fvw(const RunConfig& c, const DispatchContext& ctx) {
  std::vector<SystemParams> sets;
  if (c.verify.parameter_sets == 0) {
    sets.push_back(c.params);
  } else {
    for (std::size_t i = 0; i < c.verify.parameter_sets; ++i) sets.push_back(random_params(c.seed, i));
  }
  log_line(ctx, "fvw: " + std::to_string(sets.size()) + " parameter sets at " +
                    std::to_string(c.verify.resolution) + "^2 grid points");
  DispatchResult out;
  std::ostringstream csv;
  csv << "# avc fvw csv v1\n"
      << "set,power,jammer_power,noise_var,state_var,theta,min_value,argmin_v,argmin_w,"
         "at_anchor,algebraic_holds,holds\n";
  json certs = json::array();
  bool all_hold = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& p = sets[i];
    const auto rep = verify_f_claim(p, c.verify.resolution);
    csv << i << ',' << num(p.power) << ',' << num(p.jammer_power) << ',' << num(p.noise_var) << ','
        << num(p.state_var) << ',' << num(rep.theta) << ',' << num(rep.min_value) << ','
        << num(rep.argmin_v) << ',' << num(rep.argmin_w) << ',' << (rep.argmin_at_anchor ? 1 : 0)
        << ',' << (rep.algebraic_holds ? 1 : 0) << ',' << (rep.holds ? 1 : 0) << '\n';
    all_hold = all_hold && rep.holds;
    worst_margin = std::min(worst_margin, rep.min_value - rep.theta);
    certs.push_back({{"params",
                      {{"power", p.power},
                       {"jammer_power", p.jammer_power},
                       {"noise_var", p.noise_var},
                       {"state_var", p.state_var}}},
                     {"theta", rep.theta},
                     {"min_value", rep.min_value},
                     {"argmin", {rep.argmin_v, rep.argmin_w}},
                     {"anchor", {0.0, p.jammer_power}},
                     {"argmin_at_anchor", rep.argmin_at_anchor},
                     {"algebraic_lhs", rep.algebraic_lhs},
                     {"algebraic_rhs", rep.algebraic_rhs},
                     {"holds", rep.holds}});
  }
  out.csv = csv.str();
  out.summary = {{"resolution", c.verify.resolution},
                 {"tolerance", 1e-9},
                 {"all_hold", all_hold},
                 {"worst_min_minus_theta", worst_margin},
                 {"certificates", certs}};
  return out;
}

DispatchResult run_discrete(const RunConfig& c, const DispatchContext& ctx) {
  std::filesystem::path spec_path = c.discrete.spec;
  if (spec_path.is_relative() && !ctx.base_dir.empty()) spec_path = ctx.base_dir / spec_path;
  const auto spec = discrete::load_spec(spec_path);
  const std::size_t outer = c.discrete.outer_resolution, inner = c.discrete.inner_resolution;
  log_line(ctx, "discrete: grid " + std::to_string(outer) + " x " + std::to_string(inner));
  const auto res = discrete::solve_capacity(spec, outer, inner, c.threads);

  DispatchResult out;
  out.summary = discrete::to_json(res);
  // Refinement evidence: the same search on the half-resolution grids, which
  // are nested in the full ones.
  std::optional<double> coarse;
  if (outer % 2 == 0 && inner % 2 == 0 && outer / 2 >= 5 && inner / 2 >= 5) {
    coarse = discrete::solve_capacity(spec, outer / 2, inner / 2, c.threads).value;
    out.summary["coarse_value_bits"] = *coarse;
    out.summary["refinement_delta_bits"] = res.value - *coarse;
  } else {
    out.summary["coarse_value_bits"] = nullptr;
    out.summary["refinement_delta_bits"] = nullptr;
  }
  std::ostringstream csv;
  csv << "# avc discrete csv v1\n"
      << "value_bits,min_max_bits,duality_gap_bits,outer_resolution,inner_resolution,"
         "coarse_value_bits\n"
      << num(res.value) << ',' << num(res.min_max) << ',' << num(res.duality_gap) << ',' << outer
      << ',' << inner << ',' << (coarse ? num(*coarse) : std::string()) << '\n';
  out.csv = csv.str();
  return out;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  for (const auto& [value, name] : kExperimentNames) {
    if (value == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [value, n] : kExperimentNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

ParseResult parse_config(const json& doc) {
  ParseResult result;
  auto& errors = result.errors;
  RunConfig c;
  Section top(doc, "", errors);

  std::string experiment(experiment_name(c.experiment));
  top.read("experiment", experiment);
  if (auto e = parse_experiment(experiment)) {
    c.experiment = *e;
  } else {
    errors.push_back("experiment: unknown value '" + experiment + "'");
  }
  top.read("seed", c.seed);
  top.read("threads", c.threads);
  top.read("trials", c.trials);

  if (const json* p = top.child("params")) {
    Section s(*p, "params", errors);
    s.read("power", c.params.power);
    s.read("jammer_power", c.params.jammer_power);
    s.read("noise_var", c.params.noise_var);
    s.read("state_var", c.params.state_var);
    s.read("block_length", c.params.block_length);
    s.finish();
  }
  if (const json* p = top.child("code")) {
    Section s(*p, "code", errors);
    s.read("rate", c.rate);
    s.read("binning_rate", c.binning_rate);
    s.read("binning_slack", c.binning_slack);
    s.read("encode_tolerance", c.encode_tolerance);
    std::string backend(backend_name(c.backend));
    s.read("backend", backend);
    try {
      c.backend = parse_backend(backend);
    } catch (const Error& e) {
      errors.push_back(std::string("code.backend: ") + e.what());
    }
    s.read("max_codewords", c.max_codewords);
    s.read("max_bytes", c.max_bytes);
    s.read("message_subset", c.message_subset);
    s.read("all_messages", c.all_messages);
    s.read("codebook_refresh", c.codebook_refresh);
    s.finish();
  }
  if (const json* p = top.child("jammers")) read_jammers(*p, c.jammers, errors);
  if (const json* p = top.child("sweep")) {
    Section s(*p, "sweep", errors);
    s.read("rates", c.sweep.rates);
    std::string unit = c.sweep.rates_in_capacity_units ? "capacity" : "bits";
    s.read("rate_unit", unit);
    if (unit == "capacity") {
      c.sweep.rates_in_capacity_units = true;
    } else if (unit == "bits") {
      c.sweep.rates_in_capacity_units = false;
    } else {
      errors.push_back("sweep.rate_unit: expected 'capacity' or 'bits'");
    }
    s.read("block_lengths", c.sweep.block_lengths);
    s.finish();
  }
  if (const json* p = top.child("verify")) {
    Section s(*p, "verify", errors);
    s.read("block_lengths", c.verify.block_lengths);
    s.read("binning_rates", c.verify.binning_rates);
    s.read("delta", c.verify.delta);
    s.read("draws", c.verify.draws);
    s.read("cap_points", c.verify.cap_points);
    s.read("resolution", c.verify.resolution);
    s.read("parameter_sets", c.verify.parameter_sets);
    s.read("exponent_pairs", c.verify.exponent_pairs);
    s.read("n_max", c.verify.n_max);
    s.finish();
  }
  if (const json* p = top.child("discrete")) {
    Section s(*p, "discrete", errors);
    s.read("spec", c.discrete.spec);
    s.read("outer_resolution", c.discrete.outer_resolution);
    s.read("inner_resolution", c.discrete.inner_resolution);
    s.finish();
  }
  if (const json* p = top.child("output")) {
    Section s(*p, "output", errors);
    s.read("csv", c.output.csv);
    s.read("manifest", c.output.manifest);
    s.finish();
  }
  top.finish();

  validate_config(c, errors, result.warnings);
  if (errors.empty()) result.config = std::move(c);
  return result;
}

ParseResult parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    ParseResult r;
    r.errors.push_back(path.string() + ": " + e.what());
    return r;
  }
  return parse_config(doc);
}

RunConfig require_config(const ParseResult& result) {
  if (result.config) return *result.config;
  std::string msg = "invalid configuration:";
  for (const auto& e : result.errors) msg += "\n  " + e;
  throw ValidationError(msg);
}

json to_json(const RunConfig& c) {
  json jammers = json::array();
  for (const auto& j : c.jammers) {
    json params = json::object();
    for (const auto& [k, v] : j.params) params[k] = v;
    jammers.push_back({{"name", j.name}, {"params", params}});
  }
  json binning = c.binning_rate ? json(*c.binning_rate) : json(nullptr);
  return {
      {"experiment", std::string(experiment_name(c.experiment))},
      {"seed", c.seed},
      {"threads", c.threads},
      {"trials", c.trials},
      {"params",
       {{"power", c.params.power},
        {"jammer_power", c.params.jammer_power},
        {"noise_var", c.params.noise_var},
        {"state_var", c.params.state_var},
        {"block_length", c.params.block_length}}},
      {"code",
       {{"rate", c.rate},
        {"binning_rate", binning},
        {"binning_slack", c.binning_slack},
        {"encode_tolerance", c.encode_tolerance},
        {"backend", std::string(backend_name(c.backend))},
        {"max_codewords", c.max_codewords},
        {"max_bytes", c.max_bytes},
        {"message_subset", c.message_subset},
        {"all_messages", c.all_messages},
        {"codebook_refresh", c.codebook_refresh}}},
      {"jammers", jammers},
      {"sweep",
       {{"rates", c.sweep.rates},
        {"rate_unit", c.sweep.rates_in_capacity_units ? "capacity" : "bits"},
        {"block_lengths", c.sweep.block_lengths}}},
      {"verify",
       {{"block_lengths", c.verify.block_lengths},
        {"binning_rates", c.verify.binning_rates},
        {"delta", c.verify.delta},
        {"draws", c.verify.draws},
        {"cap_points", c.verify.cap_points},
        {"resolution", c.verify.resolution},
        {"parameter_sets", c.verify.parameter_sets},
        {"exponent_pairs", c.verify.exponent_pairs},
        {"n_max", c.verify.n_max}}},
      {"discrete",
       {{"spec", c.discrete.spec},
        {"outer_resolution", c.discrete.outer_resolution},
        {"inner_resolution", c.discrete.inner_resolution}}},
      {"output", {{"csv", c.output.csv}, {"manifest", c.output.manifest}}},
  };
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json constants_report(const SystemParams& params) {
  require_valid(params);
  const auto k = derive_constants(params);
  return {{"params",
           {{"power", params.power},
            {"jammer_power", params.jammer_power},
            {"noise_var", params.noise_var},
            {"state_var", params.state_var}}},
          {"alpha", k.alpha},
          {"codeword_power", k.codeword_power},
          {"capacity", k.capacity},
          {"binning_rate", k.binning_rate},
          {"total_rate", k.total_rate},
          {"theta", k.theta},
          {"identity_total_rate_residual", k.total_rate - (k.capacity + k.binning_rate)},
          {"identity_theta_residual", -0.5 * std::log2(1.0 - k.theta * k.theta) - k.total_rate}};
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kValidation: return 2;
    case ErrorCategory::kResource: return 3;
    case ErrorCategory::kDomain: return 4;
    case ErrorCategory::kGeometry: return 5;
    case ErrorCategory::kIo: return 6;
    case ErrorCategory::kDimension:
    case ErrorCategory::kDegenerateInput: return 7;
  }
  return 1;
}

DispatchResult dispatch(const RunConfig& config, const DispatchContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  DispatchResult out;
  switch (config.experiment) {
    case Experiment::kSimulate: out = run_simulate(config, ctx); break;
    case Experiment::kSweep: out = run_sweep(config, ctx); break;
    case Experiment::kLemma1: out = run_lemma1(config, ctx); break;
    case Experiment::kLemma2: out = run_lemma2(config, ctx); break;
    case Experiment::kLemma3: out = run_lemma3(config, ctx); break;
    case Experiment::kLemma4: out = run_lemma4(config, ctx); break;
    case Experiment::kLemma5: out = run_lemma5(config, ctx); break;
    case Experiment::kFvw: out = run_fvw(config, ctx); break;
    case Experiment::kDiscrete: out = run_discrete(config, ctx); break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json cfg = to_json(config);
  out.manifest = {{"tool", "avcsim"},
                  {"version", AVC_VERSION},
                  {"experiment", std::string(experiment_name(config.experiment))},
                  {"seed", config.seed},
                  {"config", cfg},
                  {"config_hash", fnv1a_hex(cfg.dump())},
                  {"csv_hash", fnv1a_hex(out.csv)},
                  {"csv_path", config.output.csv},
                  {"wall_time_seconds", seconds},
                  {"summary", out.summary}};
  return out;
}

std::optional<std::filesystem::path> write_artifacts(const RunConfig& config,
                                                     const DispatchResult& result) {
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    os << text;
    if (!os) throw IoError("write failed for " + path.string());
  };
  if (!config.output.csv.empty()) write(config.output.csv, result.csv);
  std::filesystem::path manifest = config.output.manifest;
  if (manifest.empty() && !config.output.csv.empty()) manifest = config.output.csv + ".manifest.json";
  if (manifest.empty()) return std::nullopt;
  write(manifest, result.manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace avc::cli
