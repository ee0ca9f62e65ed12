#include "avc/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "avc/analysis.h"
#include "avc/error.h"
#include "avc/parallel.h"

namespace avc {

namespace {

enum Tag : std::uint64_t {
  kTagSimulate = 1,
  kTagSweep = 2,
  kTagLemma1 = 11,
  kTagLemma2 = 12,
  kTagLemma3 = 13,
  kTagLemma4 = 14,
  kTagCodebook = 0xC0DE,
  kTagBootstrap = 0xB007,
};

std::vector<std::uint64_t> extend(std::vector<std::uint64_t> path,
                                  std::initializer_list<std::uint64_t> more) {
  path.insert(path.end(), more.begin(), more.end());
  return path;
}

}  // namespace

std::optional<double> TrialStats::residual() const {
  if (!j_u || !j_s_s_u) return std::nullopt;
  return std::abs(*j_u - *j_s_s_u);
}

TrialRecord run_trial(const TransmissionCode& code, const CodeConfig& cfg, std::uint64_t m,
                      const JammerStrategy& strategy, Rng& rng) {
  const SystemParams& params = cfg.params;
  Rng state_rng(rng.next_u64());
  Rng encoder_rng(rng.next_u64());
  Rng jammer_rng(rng.next_u64());
  Rng noise_rng(rng.next_u64());
  Rng decoder_rng(rng.next_u64());

  const RealVec s = sample_state(params, state_rng);
  const EncodeOutcome sent = code.encode(m, s, encoder_rng);
  const RealVec j = strategy(m, s, params, jammer_rng);
  const RealVec z = sample_noise(params, noise_rng);
  const RealVec y = transmit(sent.x, s, j, z);

  TrialRecord rec;
  rec.m = m;
  rec.encode_ok = sent.ok();
  rec.power_rescaled = sent.power_rescaled;
  rec.decoded = code.decide(y, sent, m, decoder_rng);
  rec.error = rec.decoded != m;

  const double n = static_cast<double>(params.block_length);
  TrialStats& st = rec.stats;
  const double s_len = norm(s);
  const double j_sq = norm_sq(j);
  const double j_len = std::sqrt(j_sq);
  st.z_sq = norm_sq(z) / n;
  st.s_sq = s_len * s_len / n;
  st.s_z = inner(s, z) / n;
  st.j_z = inner(j, z) / n;
  st.x_sq = norm_sq(sent.x) / n;
  st.j_sq_raw = j_sq / n;
  st.w = std::clamp(j_sq / n, 0.0, params.jammer_power);
  if (j_len > 0.0 && s_len > 0.0) st.v = std::clamp(inner(j, s) / (j_len * s_len), -1.0, 1.0);

  if (sent.ok()) {
    const VecView u = sent.u;
    const double y_len = norm(y);
    st.tau = y_len > 0.0 ? inner(y, u) / (y_len * norm(u)) : 0.0;
    st.j_u = inner(j, u) / n;
    st.u_z = inner(u, z) / n;
    if (s_len > 0.0) {
      st.j_s_s_u = (inner(j, s) / s_len) * (inner(s, u) / s_len) / n;
    } else {
      st.j_s_s_u = 0.0;
    }
  }
  return rec;
}

TrialRecord run_trial(const Codebook& cb, const CodeConfig& cfg, std::uint64_t m,
                      const JammerStrategy& strategy, Rng& rng) {
  const ExplicitCode code(std::shared_ptr<const Codebook>(std::shared_ptr<const Codebook>{}, &cb),
                          cfg);
  return run_trial(code, cfg, m, strategy, rng);
}

std::vector<std::uint64_t> message_subset(double bins, const ExperimentOptions& opts) {
  const double limit =
      opts.all_messages ? bins : std::min(bins, static_cast<double>(std::max<std::size_t>(
                                                    opts.message_subset, 1)));
  if (limit > static_cast<double>(kDefaultMaxCodewords)) {
    throw ResourceError("message enumeration would cover " + std::to_string(limit) + " messages");
  }
  std::vector<std::uint64_t> out(static_cast<std::size_t>(limit));
  // Spread the subset over the index range; messages are exchangeable, so
  // any fixed choice is fine, but spreading exercises distant bins.
  const double stride = bins / limit;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint64_t>(std::floor(static_cast<double>(i) * stride));
  }
  return out;
}

namespace {

SweepRow summarize(const CodeConfig& cfg, const JammerStrategy& strategy, std::string_view backend,
                   const std::vector<std::uint64_t>& messages, std::size_t trials,
                   const std::vector<TrialRecord>& records) {
  SweepRow row;
  row.rate = cfg.rate;
  row.binning_rate = cfg.binning_rate;
  std::tie(row.rate_actual, row.binning_rate_actual) = effective_rates(cfg);
  row.n = cfg.params.block_length;
  row.jammer = strategy.name;
  row.backend = std::string(backend);
  row.messages = messages.size();
  row.trials = trials;

  std::uint64_t failures = 0, rescaled = 0, tau_count = 0;
  double tau_sum = 0.0;
  bool first = true;
  for (std::size_t mi = 0; mi < messages.size(); ++mi) {
    std::uint64_t errors = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& r = records[mi * trials + t];
      errors += r.error ? 1 : 0;
      failures += r.encode_ok ? 0 : 1;
      rescaled += r.power_rescaled ? 1 : 0;
      if (r.stats.tau) {
        tau_sum += *r.stats.tau;
        ++tau_count;
      }
    }
    row.pooled_errors += errors;
    if (first || errors > row.worst_errors) {
      row.worst_errors = errors;
      row.worst_message = messages[mi];
      first = false;
    }
  }
  const double total = static_cast<double>(messages.size() * trials);
  row.error_rate = static_cast<double>(row.worst_errors) / static_cast<double>(trials);
  row.ci = wilson_interval(row.worst_errors, trials);
  row.pooled_error_rate = static_cast<double>(row.pooled_errors) / total;
  row.pooled_ci = wilson_interval(row.pooled_errors, messages.size() * trials);
  row.mean_tau = tau_count ? tau_sum / static_cast<double>(tau_count) : 0.0;
  row.encode_failure_rate = static_cast<double>(failures) / total;
  row.power_rescale_rate = static_cast<double>(rescaled) / total;
  return row;
}

CellOutcome run_cell_impl(const CodeConfig& cfg, const JammerStrategy& strategy,
                          std::size_t trials, const ExperimentOptions& opts,
                          const std::vector<std::uint64_t>& cell_path,
                          const TransmissionCode* fixed_code) {
  if (trials == 0) throw ValidationError("trials must be > 0");
  const auto problems = validate(cfg);
  if (!problems.empty()) {
    std::string msg = "invalid code configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  const auto messages = message_subset(code_counts(cfg).bins, opts);
  const Backend backend =
      fixed_code ? Backend::kExplicit : resolve_backend(opts.backend, cfg);

  std::unique_ptr<SampledCode> sampled;
  std::shared_ptr<const Codebook> frozen;
  if (!fixed_code && backend == Backend::kSampled) {
    sampled = std::make_unique<SampledCode>(cfg);
  } else if (!fixed_code && opts.freeze_codebook) {
    frozen = std::make_shared<const Codebook>(build_codebook(
        cfg, Rng::derive_seed(opts.seed, extend(cell_path, {kTagCodebook, 0}))));
  }

  const std::size_t batch = std::max<std::size_t>(opts.codebook_refresh, 1);
  const std::size_t batches = (trials + batch - 1) / batch;
  std::vector<TrialRecord> records(messages.size() * trials);

  parallel_for(batches, opts.threads, [&](std::size_t b) {
    std::unique_ptr<ExplicitCode> owned;
    const TransmissionCode* code = fixed_code;
    if (!code && sampled) code = sampled.get();
    if (!code) {
      auto cb = frozen ? frozen
                       : std::make_shared<const Codebook>(build_codebook(
                             cfg, Rng::derive_seed(opts.seed, extend(cell_path, {kTagCodebook, b}))));
      owned = std::make_unique<ExplicitCode>(std::move(cb), cfg);
      code = owned.get();
    }
    const std::size_t begin = b * batch;
    const std::size_t end = std::min(trials, begin + batch);
    for (std::size_t mi = 0; mi < messages.size(); ++mi) {
      for (std::size_t t = begin; t < end; ++t) {
        Rng rng(Rng::derive_seed(opts.seed, extend(cell_path, {messages[mi], t})));
        records[mi * trials + t] = run_trial(*code, cfg, messages[mi], strategy, rng);
      }
    }
  });

  CellOutcome out;
  out.row = summarize(cfg, strategy, backend_name(backend), messages, trials, records);
  out.trials = std::move(records);
  return out;
}

}  // namespace

CellOutcome run_cell(const CodeConfig& cfg, const JammerStrategy& strategy, std::size_t trials,
                     const ExperimentOptions& opts, const std::vector<std::uint64_t>& cell_path) {
  return run_cell_impl(cfg, strategy, trials, opts, cell_path, nullptr);
}

SweepRow estimate_max_error(const CodeConfig& cfg, const JammerStrategy& strategy,
                            std::size_t trials, const ExperimentOptions& opts) {
  if (trials < 100) throw ValidationError("estimate_max_error: trials must be >= 100");
  return run_cell(cfg, strategy, trials, opts, {kTagSimulate}).row;
}

SweepRow estimate_max_error(const Codebook& cb, const CodeConfig& cfg,
                            const JammerStrategy& strategy, std::size_t trials,
                            const ExperimentOptions& opts) {
  if (trials < 100) throw ValidationError("estimate_max_error: trials must be >= 100");
  if (cb.block_length() != cfg.params.block_length) {
    throw DimensionError("estimate_max_error: codebook block length differs from config");
  }
  const ExplicitCode code(std::shared_ptr<const Codebook>(std::shared_ptr<const Codebook>{}, &cb),
                          cfg);
  return run_cell_impl(cfg, strategy, trials, opts, {kTagSimulate}, &code).row;
}

double binning_rate_for(const SystemParams& params, double rate, const BinningRule& rule) {
  if (rule.kind == BinningRule::Kind::kFixed) return rule.value;
  const auto c = derive_constants(params);
  const double eps = rate < c.capacity ? c.capacity - rate : rule.slack;
  return c.binning_rate + 0.5 * eps;
}

SweepResult rate_sweep(const SystemParams& params, const std::vector<double>& rates,
                       const std::vector<std::size_t>& n_list,
                       const std::vector<JammerStrategy>& strategies, std::size_t trials,
                       const BinningRule& binning, double encode_tolerance,
                       const ExperimentOptions& opts) {
  if (rates.empty()) throw ValidationError("rate_sweep: empty rate list");
  if (n_list.empty()) throw ValidationError("rate_sweep: empty block-length list");
  if (strategies.empty()) throw ValidationError("rate_sweep: empty strategy list");

  SweepResult result;
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      CodeConfig cfg;
      cfg.params = params;
      cfg.params.block_length = n_list[ni];
      cfg.rate = rates[ri];
      cfg.binning_rate = binning_rate_for(params, rates[ri], binning);
      cfg.encode_tolerance = encode_tolerance;
      for (const auto& strategy : strategies) {
        // The strategy is left out of the path: all strategies in a cell face
        // the same states, codebooks and noise.
        auto cell = run_cell(cfg, strategy, trials, opts, {kTagSweep, ri, ni});
        std::vector<double> outcomes;
        outcomes.reserve(cell.trials.size());
        for (const auto& r : cell.trials) outcomes.push_back(r.error ? 1.0 : 0.0);
        result.rows.push_back(std::move(cell.row));
        result.outcomes.push_back(std::move(outcomes));
      }
    }
  }
  return result;
}

std::string sweep_csv_header() {
  return "# avc sweep csv v1\n"
         "rate,binning_rate,rate_actual,binning_rate_actual,n,jammer,backend,messages,trials,"
         "worst_message,worst_errors,error_rate,ci_low,ci_high,pooled_errors,pooled_error_rate,"
         "pooled_ci_low,pooled_ci_high,mean_tau,encode_failure_rate,power_rescale_rate\n";
}

std::string to_csv(const SweepResult& result) {
  std::string out = sweep_csv_header();
  char buf[1024];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.10g,%.10g,%.10g,%.10g,%zu,%s,%s,%zu,%zu,%llu,%llu,%.10g,%.10g,%.10g,%llu,"
                  "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  r.rate, r.binning_rate, r.rate_actual, r.binning_rate_actual, r.n,
                  r.jammer.c_str(), r.backend.c_str(), r.messages, r.trials,
                  static_cast<unsigned long long>(r.worst_message),
                  static_cast<unsigned long long>(r.worst_errors), r.error_rate, r.ci.lo, r.ci.hi,
                  static_cast<unsigned long long>(r.pooled_errors), r.pooled_error_rate,
                  r.pooled_ci.lo, r.pooled_ci.hi, r.mean_tau, r.encode_failure_rate,
                  r.power_rescale_rate);
    out += buf;
  }
  return out;
}

// ---- encoding success ----

Lemma1Report verify_lemma1(const SystemParams& params, const std::vector<double>& binning_rates,
                           const std::vector<std::size_t>& n_list, double encode_tolerance,
                           std::size_t trials, const ExperimentOptions& opts) {
  if (trials == 0) throw ValidationError("verify_lemma1: trials must be > 0");
  Lemma1Report report;
  report.binning_threshold = derive_constants(params).binning_rate;
  report.encode_tolerance = encode_tolerance;

  for (std::size_t bi = 0; bi < binning_rates.size(); ++bi) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      CodeConfig cfg;
      cfg.params = params;
      cfg.params.block_length = n_list[ni];
      cfg.rate = 0.0;
      cfg.binning_rate = binning_rates[bi];
      cfg.encode_tolerance = encode_tolerance;
      const Backend backend = resolve_backend(opts.backend, cfg);
      std::unique_ptr<SampledCode> sampled;
      if (backend == Backend::kSampled) sampled = std::make_unique<SampledCode>(cfg);

      Lemma1Row row;
      row.binning_rate = binning_rates[bi];
      row.n = n_list[ni];
      row.backend = std::string(backend_name(backend));
      row.trials = trials;
      row.outcomes.assign(trials, 0.0);
      // Every trial draws a fresh codebook and a fresh state.
      parallel_for(trials, opts.threads, [&](std::size_t t) {
        Rng state_rng(Rng::derive_seed(opts.seed, {kTagLemma1, bi, ni, t, 0}));
        Rng encoder_rng(Rng::derive_seed(opts.seed, {kTagLemma1, bi, ni, t, 1}));
        const RealVec s = sample_state(cfg.params, state_rng);
        bool ok;
        if (sampled) {
          ok = sampled->encode(0, s, encoder_rng).ok();
        } else {
          const Codebook cb =
              build_codebook(cfg, Rng::derive_seed(opts.seed, {kTagLemma1, bi, ni, t, 2}));
          ok = encode(cb, cfg, 0, s, encoder_rng).ok();
        }
        row.outcomes[t] = ok ? 1.0 : 0.0;
      });
      for (double o : row.outcomes) row.successes += o > 0.0 ? 1 : 0;
      row.success_rate = static_cast<double>(row.successes) / static_cast<double>(trials);
      row.ci = wilson_interval(row.successes, trials);
      report.rows.push_back(std::move(row));
    }
  }

  // Success must not drop significantly from one n to the next.
  for (std::size_t bi = 0; bi < binning_rates.size(); ++bi) {
    if (!(binning_rates[bi] > report.binning_threshold)) continue;
    for (std::size_t ni = 0; ni + 1 < n_list.size(); ++ni) {
      const auto& earlier = report.rows[bi * n_list.size() + ni].outcomes;
      const auto& later = report.rows[bi * n_list.size() + ni + 1].outcomes;
      if (!not_significantly_greater(later, earlier,
                                     Rng::derive_seed(opts.seed, {kTagBootstrap, 1, bi, ni}))) {
        report.trend_ok = false;
      }
    }
  }
  return report;
}

// ---- J-U decorrelation beyond the state direction ----

namespace {

CodeConfig lemma_code(const SystemParams& params, std::size_t n, double encode_tolerance) {
  CodeConfig cfg;
  cfg.params = params;
  cfg.params.block_length = n;
  cfg.rate = 0.0;
  cfg.binning_rate = derive_constants(params).binning_rate + 0.1;
  cfg.encode_tolerance = encode_tolerance;
  return cfg;
}

std::vector<double> truncated(const std::vector<double>& v, std::size_t len) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(len, v.size()))};
}

}  // namespace

Lemma2Report verify_lemma2(const SystemParams& params,
                           const std::vector<JammerStrategy>& strategies,
                           const std::vector<std::size_t>& n_list, std::size_t trials,
                           double encode_tolerance, const ExperimentOptions& opts) {
  if (strategies.empty() || n_list.empty()) {
    throw ValidationError("verify_lemma2: strategies and n_list must be nonempty");
  }
  Lemma2Report report;
  const double pu = derive_constants(params).codeword_power;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      const CodeConfig cfg = lemma_code(params, n_list[ni], encode_tolerance);
      const auto cell = run_cell(cfg, strategies[si], trials, opts, {kTagLemma2, ni});
      Lemma2Row row;
      row.strategy = strategies[si].name;
      row.n = n_list[ni];
      row.scaling_bound =
          2.0 * std::sqrt(params.jammer_power * pu) / std::sqrt(static_cast<double>(row.n));
      std::size_t above = 0;
      for (const auto& r : cell.trials) {
        if (const auto res = r.stats.residual()) {
          row.residuals.push_back(*res);
          row.max_residual = std::max(row.max_residual, *res);
          above += *res > report.delta ? 1 : 0;
        }
      }
      row.trials = row.residuals.size();
      row.mean_residual = mean(row.residuals);
      row.freq_above = row.trials ? static_cast<double>(above) / static_cast<double>(row.trials) : 0.0;
      report.rows.push_back(std::move(row));
    }
    const auto& first = report.rows[si * n_list.size()];
    const auto& last = report.rows[si * n_list.size() + n_list.size() - 1];
    double worst = 0.0;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      worst = std::max(worst, report.rows[si * n_list.size() + ni].max_residual);
    }
    bool ok;
    if (worst <= 1e-12) {
      ok = true;  // zero up to rounding
    } else {
      const std::size_t len = std::min(first.residuals.size(), last.residuals.size());
      ok = len > 1 && significantly_less(truncated(first.residuals, len),
                                         truncated(last.residuals, len),
                                         Rng::derive_seed(opts.seed, {kTagBootstrap, 2, si}));
    }
    report.trend.emplace_back(strategies[si].name, ok);
  }
  return report;
}

// ---- sphere-cap tail ----

Lemma3Report verify_lemma3(const std::vector<std::size_t>& n_list,
                           const std::vector<double>& gamma_list, std::size_t draws,
                           const ExperimentOptions& opts) {
  if (draws == 0) throw ValidationError("verify_lemma3: draws must be > 0");
  Lemma3Report report;
  constexpr std::size_t kChunk = 10000;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    for (std::size_t gi = 0; gi < gamma_list.size(); ++gi) {
      Lemma3Row row;
      row.n = n_list[ni];
      row.gamma = gamma_list[gi];
      row.draws = draws;
      row.bound = sphere_cap_bound(row.n, row.gamma);
      const std::size_t chunks = (draws + kChunk - 1) / kChunk;
      std::vector<std::uint64_t> hits(chunks, 0);
      // By rotation invariance the fixed direction can be e_1.
      parallel_for(chunks, opts.threads, [&](std::size_t c) {
        Rng rng(Rng::derive_seed(opts.seed, {kTagLemma3, ni, gi, c}));
        const std::size_t end = std::min(draws, (c + 1) * kChunk);
        for (std::size_t d = c * kChunk; d < end; ++d) {
          const RealVec r = sample_sphere_uniform(row.n, 1.0, rng);
          hits[c] += r[0] >= row.gamma ? 1 : 0;
        }
      });
      for (auto h : hits) row.hits += h;
      row.frequency = static_cast<double>(row.hits) / static_cast<double>(draws);
      row.standard_error =
          std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(draws));
      row.ok = row.frequency <= row.bound + 4.0 * row.standard_error;
      report.all_ok = report.all_ok && row.ok;
      report.rows.push_back(row);
    }
  }
  return report;
}

// ---- <Y^, U^> stays above theta - delta ----

EventFrequencies event_frequencies(const std::vector<TrialRecord>& trials,
                                   const SystemParams& params, double delta) {
  EventFrequencies f;
  if (trials.empty()) return f;
  std::size_t e[7] = {0, 0, 0, 0, 0, 0, 0};
  std::size_t any = 0;
  for (const auto& r : trials) {
    const auto& st = r.stats;
    const bool b0 = !r.encode_ok;
    const bool b1 = st.u_z && std::abs(*st.u_z) > delta;
    const bool b2 = std::abs(st.s_z) > delta;
    const bool b3 = std::abs(st.j_z) > delta;
    const bool b4 = std::abs(st.z_sq - params.noise_var) > delta;
    const bool b5 = std::abs(st.s_sq - params.state_var) > delta;
    const auto res = st.residual();
    const bool b6 = res && *res > delta;
    e[0] += b0;
    e[1] += b1;
    e[2] += b2;
    e[3] += b3;
    e[4] += b4;
    e[5] += b5;
    e[6] += b6;
    any += (b1 || b2 || b3 || b4 || b5 || b6) ? 1 : 0;
  }
  const double n = static_cast<double>(trials.size());
  f.e0 = e[0] / n;
  f.e1 = e[1] / n;
  f.e2 = e[2] / n;
  f.e3 = e[3] / n;
  f.e4 = e[4] / n;
  f.e5 = e[5] / n;
  f.e6 = e[6] / n;
  f.union_1_6 = any / n;
  return f;
}

Lemma4Report verify_lemma4(const SystemParams& params,
                           const std::vector<JammerStrategy>& strategies,
                           const std::vector<std::size_t>& n_list, double delta,
                           std::size_t trials, double encode_tolerance,
                           const ExperimentOptions& opts) {
  if (strategies.empty() || n_list.empty()) {
    throw ValidationError("verify_lemma4: strategies and n_list must be nonempty");
  }
  const double theta = derive_constants(params).theta;
  if (!(delta > 0.0 && delta < theta)) throw DomainError("verify_lemma4: delta must lie in (0, theta)");

  Lemma4Report report;
  report.theta = theta;
  report.delta = delta;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      const CodeConfig cfg = lemma_code(params, n_list[ni], encode_tolerance);
      const auto cell = run_cell(cfg, strategies[si], trials, opts, {kTagLemma4, ni});
      Lemma4Row row;
      row.strategy = strategies[si].name;
      row.n = n_list[ni];
      row.trials = cell.trials.size();
      double tau_sum = 0.0;
      std::size_t tau_count = 0, fvw_ok = 0;
      for (const auto& r : cell.trials) {
        const bool violated = !r.encode_ok || *r.stats.tau < theta - delta;
        row.violations += violated ? 1 : 0;
        row.encode_failures += r.encode_ok ? 0 : 1;
        row.outcomes.push_back(violated ? 1.0 : 0.0);
        if (r.stats.tau) {
          tau_sum += *r.stats.tau;
          ++tau_count;
        }
        fvw_ok += f_vw(params, r.stats.v, r.stats.w) >= theta - 0.02 ? 1 : 0;
      }
      row.violation_rate = static_cast<double>(row.violations) / static_cast<double>(row.trials);
      row.ci = wilson_interval(row.violations, row.trials);
      row.mean_tau = tau_count ? tau_sum / static_cast<double>(tau_count) : 0.0;
      row.fvw_fraction = static_cast<double>(fvw_ok) / static_cast<double>(row.trials);
      row.events = event_frequencies(cell.trials, params, delta);
      report.rows.push_back(std::move(row));
    }
    const auto& first = report.rows[si * n_list.size()];
    const auto& last = report.rows[si * n_list.size() + n_list.size() - 1];
    const bool ok = n_list.size() < 2 ||
                    not_significantly_greater(first.outcomes, last.outcomes,
                                              Rng::derive_seed(opts.seed, {kTagBootstrap, 4, si}));
    report.trend.emplace_back(strategies[si].name, ok);
  }
  return report;
}

}  // namespace avc
