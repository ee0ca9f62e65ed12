#include "avc/analysis.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "avc/error.h"

namespace avc {

double capacity(const SystemParams& params) {
  return 0.5 * std::log2(1.0 + params.power / (params.jammer_power + params.noise_var));
}

double sphere_cap_bound(std::size_t n, double gamma) {
  const double lower = 1.0 / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n));
  if (n < 1 || !(gamma > lower && gamma < 1.0)) {
    throw DomainError("sphere_cap_bound: gamma = " + std::to_string(gamma) +
                      " outside (1/sqrt(2 pi n), 1) for n = " + std::to_string(n));
  }
  const double exponent = 0.5 * (static_cast<double>(n) - 1.0) * std::log2(1.0 - gamma * gamma);
  return std::exp2(exponent);
}

double f_vw(const SystemParams& params, double v, double w) {
  if (!(v >= -1.0 && v <= 1.0)) throw DomainError("f_vw: V must lie in [-1, 1]");
  if (!(w >= 0.0 && w <= params.jammer_power)) throw DomainError("f_vw: W must lie in [0, Lambda]");
  const auto c = derive_constants(params);
  const double a = c.alpha;
  const double base = params.power + a * params.state_var;
  const double cross = v * a * std::sqrt(w * params.state_var);
  const double radicand = base + a * (w - params.jammer_power) + 2.0 * cross;
  if (!(radicand > 0.0)) throw DomainError("f_vw: nonpositive denominator at (V, W)");
  return std::sqrt(a) * (base + cross) / std::sqrt(c.codeword_power * radicand);
}

FClaimReport verify_f_claim(const SystemParams& params, std::size_t resolution) {
  if (resolution < 100) throw ValidationError("verify_f_claim: resolution must be >= 100");
  require_valid(params);
  const auto c = derive_constants(params);
  const double lam = params.jammer_power;

  FClaimReport r;
  r.resolution = resolution;
  r.theta = c.theta;
  r.cell_v = 2.0 / static_cast<double>(resolution - 1);
  const std::size_t w_points = lam > 0.0 ? resolution : 1;
  r.cell_w = lam > 0.0 ? lam / static_cast<double>(resolution - 1) : 0.0;
  r.min_value = std::numeric_limits<double>::infinity();

  for (std::size_t iw = 0; iw < w_points; ++iw) {
    // Endpoints are hit exactly so W = Lambda is always on the grid.
    const double w = iw + 1 == w_points ? lam : r.cell_w * static_cast<double>(iw);
    for (std::size_t iv = 0; iv < resolution; ++iv) {
      const double v = iv + 1 == resolution ? 1.0 : -1.0 + r.cell_v * static_cast<double>(iv);
      const double value = f_vw(params, v, w);
      if (value < r.min_value) {
        r.min_value = value;
        r.argmin_v = v;
        r.argmin_w = w;
      }
    }
  }

  // With Lambda = 0 the domain collapses to W = 0 and f is constant in V.
  const bool v_ok = lam == 0.0 || params.state_var == 0.0 || std::abs(r.argmin_v) <= r.cell_v;
  const bool w_ok = std::abs(r.argmin_w - lam) <= r.cell_w;
  r.argmin_at_anchor = v_ok && w_ok;

  const double a = c.alpha;
  const double cross = r.argmin_v * a * std::sqrt(r.argmin_w * params.state_var);
  r.algebraic_lhs = cross * cross;
  r.algebraic_rhs = (params.power + a * params.state_var) * a * (r.argmin_w - lam);
  r.algebraic_holds = r.algebraic_lhs >= r.algebraic_rhs;
  r.holds = r.min_value >= c.theta - 1e-9 && r.argmin_at_anchor && r.algebraic_holds;
  return r;
}

DoubleExpReport double_exp_limit(double a1, double a2, std::size_t n_max) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("double_exp_limit: a1, a2 must be > 0");
  if (a1 == a2) throw DomainError("double_exp_limit: a1 == a2 has no stated limit");
  if (n_max < 2) throw DomainError("double_exp_limit: n_max must be >= 2");

  DoubleExpReport r;
  r.a1 = a1;
  r.a2 = a2;
  r.limit = a1 > a2 ? 1.0 : 0.0;
  r.values.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    // log value = 2^(n a2) * log1p(-2^(-n a1))
    const double log_value = std::exp2(nn * a2) * std::log1p(-std::exp2(-nn * a1));
    r.values.push_back(std::exp(log_value));
  }
  r.final_value = r.values.back();
  const double mid = r.values[n_max / 2 - 1];
  r.converging = std::abs(r.final_value - r.limit) <= std::abs(mid - r.limit);
  return r;
}

RateCondition achievable_rate_condition(const SystemParams& params, double rate,
                                        double binning_rate, double delta) {
  const double theta = derive_constants(params).theta;
  if (!(delta > 0.0 && delta < theta)) {
    throw DomainError("achievable_rate_condition: delta must lie in (0, theta)");
  }
  const double g = theta - delta;
  RateCondition out;
  out.threshold = -0.5 * std::log2(1.0 - g * g);
  out.margin = out.threshold - (rate + binning_rate);
  out.holds = out.margin > 0.0;
  return out;
}

}  // namespace avc
