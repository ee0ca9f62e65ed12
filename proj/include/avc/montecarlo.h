#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avc/code_backend.h"
#include "avc/dpc_codec.h"
#include "avc/jammer.h"
#include "avc/stats.h"

namespace avc {

// Per-trial empirical versions of the quantities in the error analysis.
// Inner products are normalized by n. Codeword-dependent entries are empty
// when the encoder failed.
struct TrialStats {
  std::optional<double> tau;         // <Y^, U^>
  std::optional<double> j_u;         // <J, U> / n
  std::optional<double> j_s_s_u;     // <J, S^> <S^, U> / n
  std::optional<double> u_z;         // <U, Z> / n
  double z_sq = 0.0;                 // ||Z||^2 / n
  double s_sq = 0.0;                 // ||S||^2 / n
  double s_z = 0.0;                  // <S, Z> / n
  double j_z = 0.0;                  // <J, Z> / n
  double v = 0.0;                    // <J^, S^>, 0 when J or S vanishes
  double w = 0.0;                    // ||J||^2 / n, clamped to [0, Lambda]
  double x_sq = 0.0;                 // ||X||^2 / n
  double j_sq_raw = 0.0;             // ||J||^2 / n before clamping

  // |<J, U> - <J, S^><S^, U>| / n
  std::optional<double> residual() const;
};

struct TrialRecord {
  std::uint64_t m = 0;
  bool encode_ok = false;
  bool power_rescaled = false;
  std::uint64_t decoded = 0;
  bool error = false;
  TrialStats stats;
};

// One encode -> jam -> noise -> decide pass. The stream is split into
// independent sub-streams for state, encoder, jammer, noise and decoder so a
// strategy's consumption never shifts the other draws.
TrialRecord run_trial(const TransmissionCode& code, const CodeConfig& cfg, std::uint64_t m,
                      const JammerStrategy& strategy, Rng& rng);

TrialRecord run_trial(const Codebook& cb, const CodeConfig& cfg, std::uint64_t m,
                      const JammerStrategy& strategy, Rng& rng);

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::size_t threads = 0;              // 0 = machine parallelism
  Backend backend = Backend::kAuto;
  std::size_t codebook_refresh = 100;   // trials per explicit codebook
  bool freeze_codebook = false;         // one explicit codebook for the whole cell
  std::size_t message_subset = 8;
  bool all_messages = false;
};

struct SweepRow {
  double rate = 0.0;
  double binning_rate = 0.0;
  double rate_actual = 0.0;
  double binning_rate_actual = 0.0;
  std::size_t n = 0;
  std::string jammer;
  std::string backend;
  std::size_t messages = 0;
  std::size_t trials = 0;               // per message
  std::uint64_t worst_message = 0;
  std::uint64_t worst_errors = 0;
  double error_rate = 0.0;              // maximum over the sampled messages
  Interval ci;
  std::uint64_t pooled_errors = 0;
  double pooled_error_rate = 0.0;
  Interval pooled_ci;
  double mean_tau = 0.0;
  double encode_failure_rate = 0.0;
  double power_rescale_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Per-trial 0/1 error outcomes of each row, ordered by (message, trial).
  std::vector<std::vector<double>> outcomes;
};

// Fixed CSV schema; the first line is a version comment.
std::string sweep_csv_header();
std::string to_csv(const SweepResult& result);

// Messages whose error rate is estimated for a code with `bins` messages.
std::vector<std::uint64_t> message_subset(double bins, const ExperimentOptions& opts);

struct CellOutcome {
  SweepRow row;
  std::vector<TrialRecord> trials;      // ordered by (message, trial)
};

// Runs `trials` trials per message for one (code, strategy) cell. `cell_path`
// identifies the cell in the seed derivation so unrelated cells draw
// independent randomness while strategies sharing a path see common
// state/noise/codebook draws.
CellOutcome run_cell(const CodeConfig& cfg, const JammerStrategy& strategy, std::size_t trials,
                     const ExperimentOptions& opts, const std::vector<std::uint64_t>& cell_path);

// Maximal-error estimate over the message subset, with fresh codebooks every
// opts.codebook_refresh trials. trials must be >= 100.
SweepRow estimate_max_error(const CodeConfig& cfg, const JammerStrategy& strategy,
                            std::size_t trials, const ExperimentOptions& opts);

// Same estimate against one fixed explicit codebook.
SweepRow estimate_max_error(const Codebook& cb, const CodeConfig& cfg,
                            const JammerStrategy& strategy, std::size_t trials,
                            const ExperimentOptions& opts);

// How R~ is chosen for each swept rate. kAuto follows the achievability
// recipe R~ = C~ + eps/2 with eps = C - R; for R >= C it uses eps = slack.
struct BinningRule {
  enum class Kind { kFixed, kAuto };
  Kind kind = Kind::kAuto;
  double value = 0.0;   // kFixed: R~ itself
  double slack = 0.1;   // kAuto with R >= C
};

double binning_rate_for(const SystemParams& params, double rate, const BinningRule& rule);

// Full factorial sweep, rows in (rate, n, strategy) order.
SweepResult rate_sweep(const SystemParams& params, const std::vector<double>& rates,
                       const std::vector<std::size_t>& n_list,
                       const std::vector<JammerStrategy>& strategies, std::size_t trials,
                       const BinningRule& binning, double encode_tolerance,
                       const ExperimentOptions& opts);

// ---- verification experiments ----

struct Lemma1Row {
  double binning_rate = 0.0;
  std::size_t n = 0;
  std::string backend;
  std::size_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;
  Interval ci;
  std::vector<double> outcomes;
};

struct Lemma1Report {
  double binning_threshold = 0.0;  // C~
  double encode_tolerance = 0.0;
  std::vector<Lemma1Row> rows;     // (R~, n) order
  // For each R~ > C~: success is not significantly lower at the next n.
  bool trend_ok = true;
};

Lemma1Report verify_lemma1(const SystemParams& params, const std::vector<double>& binning_rates,
                           const std::vector<std::size_t>& n_list, double encode_tolerance,
                           std::size_t trials, const ExperimentOptions& opts);

struct Lemma2Row {
  std::string strategy;
  std::size_t n = 0;
  std::size_t trials = 0;          // trials with a codeword
  double mean_residual = 0.0;      // mean |<J,U> - <J,S^><S^,U>| / n
  double max_residual = 0.0;
  double freq_above = 0.0;         // fraction with residual > delta
  double scaling_bound = 0.0;      // 2 sqrt(Lambda P_U) / sqrt(n)
  std::vector<double> residuals;
};

struct Lemma2Report {
  double delta = 0.05;
  std::vector<Lemma2Row> rows;     // (strategy, n) order
  // Per strategy: mean residual at the largest n significantly below the
  // smallest n, or identically zero.
  std::vector<std::pair<std::string, bool>> trend;
};

Lemma2Report verify_lemma2(const SystemParams& params,
                           const std::vector<JammerStrategy>& strategies,
                           const std::vector<std::size_t>& n_list, std::size_t trials,
                           double encode_tolerance, const ExperimentOptions& opts);

struct Lemma3Row {
  std::size_t n = 0;
  double gamma = 0.0;
  std::size_t draws = 0;
  std::uint64_t hits = 0;
  double frequency = 0.0;
  double bound = 0.0;
  double standard_error = 0.0;
  bool ok = false;                 // frequency <= bound + 4 se
};

struct Lemma3Report {
  std::vector<Lemma3Row> rows;
  bool all_ok = true;
};

Lemma3Report verify_lemma3(const std::vector<std::size_t>& n_list,
                           const std::vector<double>& gamma_list, std::size_t draws,
                           const ExperimentOptions& opts);

struct EventFrequencies {
  double e0 = 0.0;  // encoder failure
  double e1 = 0.0;  // |<U,Z>| > n d
  double e2 = 0.0;  // |<S,Z>| > n d
  double e3 = 0.0;  // |<J,Z>| > n d
  double e4 = 0.0;  // | ||Z||^2 - n sigma^2 | > n d
  double e5 = 0.0;  // | ||S||^2 - n sigma_S^2 | > n d
  double e6 = 0.0;  // |<J,U> - <J,S^><S^,U>| > n d
  double union_1_6 = 0.0;
};

EventFrequencies event_frequencies(const std::vector<TrialRecord>& trials,
                                   const SystemParams& params, double delta);

struct Lemma4Row {
  std::string strategy;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t violations = 0;    // tau < theta - delta, encoder failures included
  std::uint64_t encode_failures = 0;
  double violation_rate = 0.0;
  Interval ci;
  double mean_tau = 0.0;
  double fvw_fraction = 0.0;       // fraction with f(V, W) >= theta - 0.02
  EventFrequencies events;
  std::vector<double> outcomes;
};

struct Lemma4Report {
  double theta = 0.0;
  double delta = 0.0;
  std::vector<Lemma4Row> rows;     // (strategy, n) order
  std::vector<std::pair<std::string, bool>> trend;  // violations not increasing in n
};

Lemma4Report verify_lemma4(const SystemParams& params,
                           const std::vector<JammerStrategy>& strategies,
                           const std::vector<std::size_t>& n_list, double delta,
                           std::size_t trials, double encode_tolerance,
                           const ExperimentOptions& opts);

}  // namespace avc
