#pragma once

#include <cstddef>
#include <vector>

#include "avc/channel_model.h"

namespace avc {

// C = 1/2 log2(1 + P / (Lambda + sigma^2)), bits per channel use.
double capacity(const SystemParams& params);

// Tail bound for a uniform point R on the unit sphere and a fixed unit r:
// P(<r, R> >= gamma) <= 2^((n - 1)/2 * log2(1 - gamma^2)).
// Only valid for 1/sqrt(2 pi n) < gamma < 1; throws DomainError otherwise.
double sphere_cap_bound(std::size_t n, double gamma);

// Deterministic lower bound on <Y^, U^> as a function of the jammer's state
// alignment V = <J^, S^> and power W = ||J||^2 / n:
//
//   f(V, W) = sqrt(a) (P + a sS2 + V a sqrt(W sS2))
//             / sqrt(P_U (P + a sS2 + a (W - Lambda) + 2 V a sqrt(W sS2)))
//
// Requires -1 <= V <= 1 and 0 <= W <= Lambda; a nonpositive radicand in the
// denominator is reported as DomainError rather than extrapolated.
double f_vw(const SystemParams& params, double v, double w);

struct FClaimReport {
  std::size_t resolution = 0;
  double theta = 0.0;
  double min_value = 0.0;
  double argmin_v = 0.0;
  double argmin_w = 0.0;
  double cell_v = 0.0;             // grid spacing along V
  double cell_w = 0.0;             // grid spacing along W (0 when Lambda = 0)
  bool argmin_at_anchor = false;   // within one cell of (0, Lambda)
  // (V a sqrt(W sS2))^2 >= (P + a sS2) a (W - Lambda) at the grid minimum.
  double algebraic_lhs = 0.0;
  double algebraic_rhs = 0.0;
  bool algebraic_holds = false;
  bool holds = false;              // min >= theta - 1e-9 and both checks above
};

// Exhaustive resolution x resolution grid over [-1, 1] x [0, Lambda].
// Throws ValidationError for resolution < 100.
FClaimReport verify_f_claim(const SystemParams& params, std::size_t resolution);

struct DoubleExpReport {
  double a1 = 0.0;
  double a2 = 0.0;
  double limit = 0.0;              // 1 when a1 > a2, 0 when a1 < a2
  std::vector<double> values;      // values[n - 1] = (1 - 2^(-n a1))^(2^(n a2))
  double final_value = 0.0;
  bool converging = false;         // distance to the limit shrank over the second half
};

// Evaluates (1 - 2^(-n a1))^(2^(n a2)) for n = 1..n_max in the log domain.
// Rejects a1 == a2 and nonpositive exponents with DomainError.
DoubleExpReport double_exp_limit(double a1, double a2, std::size_t n_max);

struct RateCondition {
  bool holds = false;
  double threshold = 0.0;          // h(delta) = -1/2 log2(1 - (theta - delta)^2)
  double margin = 0.0;             // threshold - (R + R~)
};

// R + R~ < -1/2 log2(1 - (theta - delta)^2). Requires 0 < delta < theta.
RateCondition achievable_rate_condition(const SystemParams& params, double rate,
                                        double binning_rate, double delta);

}  // namespace avc
