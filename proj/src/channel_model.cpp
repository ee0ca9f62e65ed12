#include "avc/channel_model.h"

#include <cmath>

#include "avc/error.h"

namespace avc {

std::vector<std::string> validate(const SystemParams& params) {
  std::vector<std::string> problems;
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(params.power) || !(params.power > 0.0)) problems.push_back("power: must be finite and > 0");
  if (!finite(params.jammer_power) || params.jammer_power < 0.0)
    problems.push_back("jammer_power: must be finite and >= 0");
  if (!finite(params.noise_var) || !(params.noise_var > 0.0))
    problems.push_back("noise_var: must be finite and > 0");
  if (!finite(params.state_var) || params.state_var < 0.0)
    problems.push_back("state_var: must be finite and >= 0");
  if (params.block_length < 1) problems.push_back("block_length: must be >= 1");
  return problems;
}

void require_valid(const SystemParams& params) {
  const auto problems = validate(params);
  if (problems.empty()) return;
  std::string msg = "invalid system parameters:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ValidationError(msg);
}

DerivedConstants derive_constants(const SystemParams& params) {
  const double p = params.power;
  const double lam = params.jammer_power;
  const double s2 = params.noise_var;
  const double ss2 = params.state_var;

  DerivedConstants c;
  c.alpha = p / (p + lam + s2);
  c.codeword_power = p + c.alpha * c.alpha * ss2;
  c.theta = std::sqrt(c.alpha * (p + c.alpha * ss2) / c.codeword_power);
  c.capacity = 0.5 * std::log2(1.0 + p / (lam + s2));
  c.binning_rate = 0.5 * std::log2(c.codeword_power / p);
  c.total_rate = c.capacity + c.binning_rate;
  return c;
}

namespace {

RealVec gaussian_vector(std::size_t n, double variance, Rng& rng) {
  RealVec v(n, 0.0);
  if (variance == 0.0) return v;
  const double sd = std::sqrt(variance);
  for (double& x : v) x = sd * rng.gaussian();
  return v;
}

}  // namespace

RealVec sample_state(const SystemParams& params, Rng& rng) {
  return gaussian_vector(params.block_length, params.state_var, rng);
}

RealVec sample_noise(const SystemParams& params, Rng& rng) {
  return gaussian_vector(params.block_length, params.noise_var, rng);
}

RealVec transmit(VecView x, VecView s, VecView j, VecView z) {
  if (x.size() != s.size() || x.size() != j.size() || x.size() != z.size()) {
    throw DimensionError("transmit: all four vectors must share the block length");
  }
  RealVec y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + s[i] + j[i] + z[i];
  return y;
}

}  // namespace avc
