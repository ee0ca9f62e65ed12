#include "avc/jammer.h"

#include <cmath>
#include <sstream>

#include "avc/error.h"

namespace avc {

RealVec JammerStrategy::operator()(std::uint64_t m, VecView s, const SystemParams& params,
                                   Rng& rng) const {
  RealVec j = generate(m, s, params, rng);
  const double budget = static_cast<double>(params.block_length) * params.jammer_power;
  if (j.size() != params.block_length) throw DimensionError("jammer '" + name + "': wrong length");
  if (norm_sq(j) > budget * (1.0 + 1e-12) + 1e-300) {
    throw DomainError("jammer '" + name + "' exceeded its power budget");
  }
  return j;
}

RealVec jam_sphere_uniform(std::uint64_t, VecView s, const SystemParams& params, Rng& rng) {
  const std::size_t n = params.block_length;
  if (params.jammer_power == 0.0) return RealVec(n, 0.0);
  (void)s;
  return sample_sphere_uniform(n, static_cast<double>(n) * params.jammer_power, rng);
}

RealVec jam_state_aligned(std::uint64_t, VecView s, const SystemParams& params, Rng&, int sign) {
  const std::size_t n = params.block_length;
  const double s_len = norm(s);
  RealVec j(n, 0.0);
  if (!(s_len > 0.0) || params.jammer_power == 0.0) return j;
  const double scale = (sign < 0 ? -1.0 : 1.0) *
                       std::sqrt(static_cast<double>(n) * params.jammer_power) / s_len;
  for (std::size_t i = 0; i < n; ++i) j[i] = scale * s[i];
  return j;
}

RealVec jam_gaussian_iid_truncated(std::uint64_t, VecView, const SystemParams& params, Rng& rng) {
  const std::size_t n = params.block_length;
  RealVec j(n, 0.0);
  if (params.jammer_power == 0.0) return j;
  const double sd = std::sqrt(params.jammer_power);
  for (double& v : j) v = sd * rng.gaussian();
  const double budget = static_cast<double>(n) * params.jammer_power;
  const double len_sq = norm_sq(j);
  if (len_sq > budget) {
    const double factor = std::sqrt(budget / len_sq);
    for (double& v : j) v *= factor;
  }
  return j;
}

RealVec jam_state_cancel_residual(std::uint64_t, VecView s, const SystemParams& params, Rng& rng,
                                  double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("state_cancel_residual: beta must lie in [0, 1]");
  }
  const std::size_t n = params.block_length;
  const double budget = static_cast<double>(n) * params.jammer_power;
  RealVec j(n, 0.0);
  if (budget == 0.0) return j;

  const double s_sq = norm_sq(s);
  const double alpha = derive_constants(params).alpha;
  double c = 0.0;
  if (s_sq > 0.0) c = std::min(std::sqrt(beta * budget / s_sq), 1.0 - alpha);
  axpy(j, -c, s);

  const double remaining = budget - c * c * s_sq;
  if (remaining > 1e-12 * budget && n >= 2) {
    axpy(j, 1.0, sample_sphere_orthogonal(s, remaining, rng));
  }
  // Rounding can push the sum a hair past the budget.
  const double len_sq = norm_sq(j);
  if (len_sq > budget) {
    const double factor = std::sqrt(budget / len_sq);
    for (double& v : j) v *= factor;
  }
  return j;
}

namespace {

double param_or(const StrategyParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown_keys(const std::string& name, const StrategyParams& p,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("jammer '" + name + "': unknown parameter '" + key + "'");
  }
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

JammerStrategy make_strategy(const std::string& name, const StrategyParams& params) {
  if (name == "sphere_uniform") {
    reject_unknown_keys(name, params, {});
    return {name, jam_sphere_uniform};
  }
  if (name == "state_aligned") {
    reject_unknown_keys(name, params, {"sign"});
    const double sign = param_or(params, "sign", 1.0);
    if (sign != 1.0 && sign != -1.0) {
      throw ValidationError("state_aligned: sign must be +1 or -1");
    }
    const int s = sign > 0 ? 1 : -1;
    return {name + (s > 0 ? "(+)" : "(-)"),
            [s](std::uint64_t m, VecView st, const SystemParams& p, Rng& rng) {
              return jam_state_aligned(m, st, p, rng, s);
            }};
  }
  if (name == "gaussian_iid_truncated") {
    reject_unknown_keys(name, params, {});
    return {name, jam_gaussian_iid_truncated};
  }
  if (name == "state_cancel_residual") {
    reject_unknown_keys(name, params, {"beta"});
    const double beta = param_or(params, "beta", 0.5);
    if (!(beta >= 0.0 && beta <= 1.0)) {
      throw ValidationError("state_cancel_residual: beta must lie in [0, 1]");
    }
    return {name + "(beta=" + format_param(beta) + ")",
            [beta](std::uint64_t m, VecView st, const SystemParams& p, Rng& rng) {
              return jam_state_cancel_residual(m, st, p, rng, beta);
            }};
  }
  throw ValidationError("unknown jammer '" + name + "'");
}

std::vector<std::string> strategy_names() {
  return {"sphere_uniform", "state_aligned", "gaussian_iid_truncated", "state_cancel_residual"};
}

std::vector<JammerStrategy> shipped_strategies() {
  return {
      make_strategy("sphere_uniform"),
      make_strategy("state_aligned", {{"sign", 1.0}}),
      make_strategy("state_aligned", {{"sign", -1.0}}),
      make_strategy("gaussian_iid_truncated"),
      make_strategy("state_cancel_residual", {{"beta", 0.25}}),
      make_strategy("state_cancel_residual", {{"beta", 0.5}}),
      make_strategy("state_cancel_residual", {{"beta", 1.0}}),
  };
}

}  // namespace avc
