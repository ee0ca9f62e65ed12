#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "avc/cli.h"
#include "avc/error.h"

using nlohmann::json;
namespace cli = avc::cli;

namespace {

// "name" or "name:key=value,key=value"
json jammer_from_flag(const std::string& text) {
  const auto colon = text.find(':');
  json j = {{"name", text.substr(0, colon)}, {"params", json::object()}};
  if (colon == std::string::npos) return j;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw avc::ValidationError("--jammer: expected key=value in '" + item + "'");
    try {
      j["params"][item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw avc::ValidationError("--jammer: '" + item + "' has a non-numeric value");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return j;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("AVC_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 0);
  if (*end != '\0' || raw[0] == '-') {
    throw avc::ValidationError(std::string("AVC_SEED: not an unsigned integer: '") + raw + "'");
  }
  return v;
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw avc::IoError("cannot open config file " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw avc::ValidationError(path + ": " + e.what());
  }
}

template <typename T>
void set_if(const CLI::Option* opt, json& parent, const char* key, const T& value) {
  if (opt->count() > 0) parent[key] = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian AVC dirty-paper coding simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_csv, out_manifest, backend;
  std::uint64_t seed = 0;
  std::size_t threads = 0, trials = 0, n = 0;
  double power = 0, jammer_power = 0, noise_var = 0, state_var = 0;
  double rate = 0, binning_rate = 0, tolerance = 0;
  std::vector<std::string> jammers;
  bool dry_run = false, quiet = false;

  app.add_option("--config,-c", config_path, "JSON config file; flags override its keys");
  auto* o_seed = app.add_option("--seed", seed, "master seed (default: config, then $AVC_SEED, then 1)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads, 0 = machine parallelism");
  auto* o_trials = app.add_option("--trials", trials, "trials per message / per cell");
  auto* o_out = app.add_option("--out,-o", out_csv, "CSV output path (default: standard output)");
  auto* o_manifest = app.add_option("--manifest", out_manifest, "manifest path (default: <out>.manifest.json)");
  auto* o_power = app.add_option("--power", power, "P");
  auto* o_jpower = app.add_option("--jammer-power", jammer_power, "Lambda");
  auto* o_noise = app.add_option("--noise-var", noise_var, "sigma^2");
  auto* o_state = app.add_option("--state-var", state_var, "sigma_S^2");
  auto* o_n = app.add_option("--n,--block-length", n, "block length");
  auto* o_rate = app.add_option("--rate", rate, "message rate R in bits");
  auto* o_bin = app.add_option("--binning-rate", binning_rate, "binning rate R~ in bits (default: automatic)");
  auto* o_tol = app.add_option("--tolerance", tolerance, "encoder tolerance delta_0");
  auto* o_backend = app.add_option("--backend", backend, "auto | explicit | sampled");
  auto* o_jammer = app.add_option("--jammer", jammers, "strategy, e.g. state_cancel_residual:beta=0.25 (repeatable)");
  app.add_flag("--dry-run", dry_run, "print the effective config and exit");
  app.add_flag("--quiet,-q", quiet, "no progress output");

  app.add_subcommand("run", "run the experiment named in the config file");
  auto* simulate = app.add_subcommand("simulate", "maximal error probability of one code");
  auto* sweep = app.add_subcommand("sweep", "error rate over a rate x block-length grid");
  std::vector<double> sweep_rates;
  std::string rate_unit;
  std::vector<std::size_t> sweep_ns;
  auto* o_srates = sweep->add_option("--rates", sweep_rates, "rates to sweep");
  auto* o_unit = sweep->add_option("--rate-unit", rate_unit, "capacity | bits")->check(CLI::IsMember({"capacity", "bits"}));
  auto* o_sns = sweep->add_option("--block-lengths", sweep_ns, "block lengths");

  auto* verify = app.add_subcommand("verify", "numerical checks of the error analysis");
  std::string target;
  std::vector<std::size_t> verify_ns;
  std::vector<double> verify_bins;
  double delta = 0;
  std::size_t draws = 0, resolution = 0, parameter_sets = 0, n_max = 0;
  verify->add_option("--target", target, "lemma1..lemma5 | fvw")
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "fvw"}));
  auto* o_vns = verify->add_option("--block-lengths", verify_ns, "block lengths");
  auto* o_vbins = verify->add_option("--binning-rates", verify_bins, "binning rates (lemma1)");
  auto* o_delta = verify->add_option("--delta", delta, "deviation threshold");
  auto* o_draws = verify->add_option("--draws", draws, "sphere draws per point (lemma3)");
  auto* o_res = verify->add_option("--resolution", resolution, "grid points per axis (fvw)");
  auto* o_psets = verify->add_option("--parameter-sets", parameter_sets, "random parameter sets (fvw)");
  auto* o_nmax = verify->add_option("--n-max", n_max, "largest n (lemma5)");

  auto* discrete = app.add_subcommand("discrete", "grid max-min capacity of a finite AVC");
  std::string spec_path;
  std::size_t outer = 0, inner = 0;
  auto* o_spec = discrete->add_option("--spec", spec_path, "JSON channel spec");
  auto* o_outer = discrete->add_option("--outer", outer, "encoder grid resolution");
  auto* o_inner = discrete->add_option("--inner", inner, "jammer grid resolution");

  auto* constants = app.add_subcommand("constants", "print the derived constants");
  bool as_json = false;
  constants->add_flag("--json", as_json, "JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    json doc = config_path.empty() ? json::object() : load_json(config_path);
    if (!doc.is_object()) throw avc::ValidationError("config: expected a JSON object");

    if (simulate->parsed()) doc["experiment"] = "simulate";
    if (sweep->parsed()) doc["experiment"] = "sweep";
    if (verify->parsed()) doc["experiment"] = "verify-" + target;
    if (discrete->parsed()) doc["experiment"] = "discrete";

    if (o_seed->count() > 0) {
      doc["seed"] = seed;
    } else if (!doc.contains("seed")) {
      if (auto env = seed_from_env()) doc["seed"] = *env;
    }
    set_if(o_threads, doc, "threads", threads);
    set_if(o_trials, doc, "trials", trials);
    if (o_power->count() || o_jpower->count() || o_noise->count() || o_state->count() || o_n->count()) {
      json& p = doc["params"];
      set_if(o_power, p, "power", power);
      set_if(o_jpower, p, "jammer_power", jammer_power);
      set_if(o_noise, p, "noise_var", noise_var);
      set_if(o_state, p, "state_var", state_var);
      set_if(o_n, p, "block_length", n);
    }
    if (o_rate->count() || o_bin->count() || o_tol->count() || o_backend->count()) {
      json& c = doc["code"];
      set_if(o_rate, c, "rate", rate);
      set_if(o_bin, c, "binning_rate", binning_rate);
      set_if(o_tol, c, "encode_tolerance", tolerance);
      set_if(o_backend, c, "backend", backend);
    }
    if (o_jammer->count() > 0) {
      json list = json::array();
      for (const auto& j : jammers) list.push_back(jammer_from_flag(j));
      doc["jammers"] = list;
    }
    if (o_srates->count() || o_unit->count() || o_sns->count()) {
      json& s = doc["sweep"];
      set_if(o_srates, s, "rates", sweep_rates);
      set_if(o_unit, s, "rate_unit", rate_unit);
      set_if(o_sns, s, "block_lengths", sweep_ns);
    }
    if (verify->parsed()) {
      json v = doc.value("verify", json::object());
      set_if(o_vns, v, "block_lengths", verify_ns);
      set_if(o_vbins, v, "binning_rates", verify_bins);
      set_if(o_delta, v, "delta", delta);
      set_if(o_draws, v, "draws", draws);
      set_if(o_res, v, "resolution", resolution);
      set_if(o_psets, v, "parameter_sets", parameter_sets);
      set_if(o_nmax, v, "n_max", n_max);
      if (!v.empty()) doc["verify"] = v;
    }
    std::filesystem::path base_dir;
    if (!config_path.empty()) base_dir = std::filesystem::path(config_path).parent_path();
    if (discrete->parsed() && (o_spec->count() || o_outer->count() || o_inner->count())) {
      json& d = doc["discrete"];
      if (o_spec->count()) {
        d["spec"] = std::filesystem::absolute(spec_path).string();
      }
      set_if(o_outer, d, "outer_resolution", outer);
      set_if(o_inner, d, "inner_resolution", inner);
    }
    if (o_out->count() || o_manifest->count()) {
      json& out = doc["output"];
      set_if(o_out, out, "csv", out_csv);
      set_if(o_manifest, out, "manifest", out_manifest);
    }

    const auto parsed = cli::parse_config(doc);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
    const cli::RunConfig config = cli::require_config(parsed);

    if (dry_run) {
      std::cout << cli::to_json(config).dump(2) << '\n';
      return 0;
    }

    if (constants->parsed()) {
      const json report = cli::constants_report(config.params);
      if (as_json) {
        std::cout << report.dump(2) << '\n';
      } else {
        for (const char* key : {"alpha", "codeword_power", "capacity", "binning_rate", "total_rate",
                                "theta", "identity_total_rate_residual", "identity_theta_residual"}) {
          std::printf("%-30s %.12g\n", key, report[key].get<double>());
        }
      }
      return 0;
    }

    cli::DispatchContext ctx;
    ctx.base_dir = base_dir;
    ctx.log = quiet ? nullptr : &std::cerr;
    const auto result = cli::dispatch(config, ctx);
    const auto manifest = cli::write_artifacts(config, result);
    if (config.output.csv.empty()) {
      std::cout << result.csv;
    } else {
      std::cout << result.summary.dump(2) << '\n';
    }
    if (manifest && !quiet) std::cerr << "manifest: " << manifest->string() << '\n';
    return 0;
  } catch (const avc::Error& e) {
    std::cerr << "error [" << avc::category_name(e.category()) << "]: " << e.what() << '\n';
    return cli::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
