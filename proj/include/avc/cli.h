#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "avc/channel_model.h"
#include "avc/code_backend.h"
#include "avc/error.h"
#include "avc/jammer.h"

namespace avc::cli {

enum class Experiment {
  kSimulate,
  kSweep,
  kLemma1,
  kLemma2,
  kLemma3,
  kLemma4,
  kLemma5,
  kFvw,
  kDiscrete,
};

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct JammerSpec {
  std::string name;
  StrategyParams params;
  bool operator==(const JammerSpec&) const = default;
};

struct SweepSettings {
  std::vector<double> rates{0.5, 0.8};
  bool rates_in_capacity_units = true;   // rates are fractions of C
  std::vector<std::size_t> block_lengths{50, 100, 200};
  bool operator==(const SweepSettings&) const = default;
};

// Empty lists mean "use the target's default".
struct VerifySettings {
  std::vector<std::size_t> block_lengths;
  std::vector<double> binning_rates;
  double delta = 0.05;
  std::size_t draws = 1000000;
  std::vector<std::pair<std::size_t, double>> cap_points{{50, 0.2}, {100, 0.3}, {100, 0.5}};
  std::size_t resolution = 1000;
  std::size_t parameter_sets = 0;        // 0: the configured params only
  std::vector<std::pair<double, double>> exponent_pairs{{0.2, 0.1}, {0.1, 0.2}};
  std::size_t n_max = 200;
  bool operator==(const VerifySettings&) const = default;
};

struct DiscreteSettings {
  std::string spec;
  std::size_t outer_resolution = 10;
  std::size_t inner_resolution = 10;
  bool operator==(const DiscreteSettings&) const = default;
};

struct OutputSettings {
  std::string csv;                       // empty: standard output
  std::string manifest;                  // empty: <csv>.manifest.json when csv is set
  bool operator==(const OutputSettings&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::kSimulate;
  SystemParams params{1.0, 1.0, 1.0, 1.0, 100};
  double rate = 0.1;
  std::optional<double> binning_rate;    // empty: C~ + (C - R) / 2
  double binning_slack = 0.1;            // R~ - C~ used when R >= C
  double encode_tolerance = 0.2;
  Backend backend = Backend::kAuto;
  std::uint64_t max_codewords = kDefaultMaxCodewords;
  std::uint64_t max_bytes = kDefaultMaxCodebookBytes;
  std::vector<JammerSpec> jammers;       // empty: the experiment's default set
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::size_t message_subset = 8;
  bool all_messages = false;
  std::size_t codebook_refresh = 100;
  SweepSettings sweep;
  VerifySettings verify;
  DiscreteSettings discrete;
  OutputSettings output;

  bool operator==(const RunConfig&) const = default;
};

struct ParseResult {
  std::optional<RunConfig> config;       // set only when errors is empty
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// Reads every key, then validates the whole config, collecting all problems
// instead of stopping at the first. Unknown keys are errors.
ParseResult parse_config(const nlohmann::json& doc);
ParseResult parse_config(const std::filesystem::path& path);

// Throws ValidationError carrying every collected error.
RunConfig require_config(const ParseResult& result);

// Complete form with every default filled in; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

// DerivedConstants plus the two closed-form identity residuals.
nlohmann::json constants_report(const SystemParams& params);

int exit_code(ErrorCategory category);

struct DispatchContext {
  std::filesystem::path base_dir;        // relative input paths resolve here
  std::ostream* log = nullptr;           // progress and warnings
};

struct DispatchResult {
  std::string csv;
  nlohmann::json summary;
  nlohmann::json manifest;
};

// Runs the configured experiment. Artifacts are returned, not written.
DispatchResult dispatch(const RunConfig& config, const DispatchContext& ctx = {});

// Writes the CSV and manifest to the configured paths (CSV is skipped when
// no path is set). Returns the manifest path written, if any.
std::optional<std::filesystem::path> write_artifacts(const RunConfig& config,
                                                     const DispatchResult& result);

}  // namespace avc::cli
