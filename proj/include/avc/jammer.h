#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "avc/channel_model.h"
#include "avc/geometry.h"
#include "avc/random.h"

namespace avc {

// A power-limited adversary. It sees the message index and the state but
// never the code's randomness: the generator signature has no access to it.
// The message index is part of the signature so that message-aware attacks
// fit the same interface, even though none of the built-in strategies use it.
struct JammerStrategy {
  using Generator =
      std::function<RealVec(std::uint64_t m, VecView s, const SystemParams& params, Rng& rng)>;

  std::string name;
  Generator generate;

  // Runs the generator and rejects outputs outside ||J||^2 <= n Lambda (1 + 1e-12).
  RealVec operator()(std::uint64_t m, VecView s, const SystemParams& params, Rng& rng) const;
};

// Uniform on the sphere of radius sqrt(n Lambda), independent of m and s.
RealVec jam_sphere_uniform(std::uint64_t m, VecView s, const SystemParams& params, Rng& rng);

// sign * sqrt(n Lambda) * s^; zero when s = 0.
RealVec jam_state_aligned(std::uint64_t m, VecView s, const SystemParams& params, Rng& rng,
                          int sign);

// i.i.d. N(0, Lambda), rescaled onto the sphere when it leaves the ball.
RealVec jam_gaussian_iid_truncated(std::uint64_t m, VecView s, const SystemParams& params,
                                   Rng& rng);

// Spends up to beta n Lambda cancelling (1 - a) s, the rest uniform in the
// hyperplane orthogonal to s:
//   J = -c s + J',  c = min(sqrt(beta n Lambda) / ||s||, 1 - a).
RealVec jam_state_cancel_residual(std::uint64_t m, VecView s, const SystemParams& params,
                                  Rng& rng, double beta);

using StrategyParams = std::map<std::string, double>;

// Looks a strategy up by name. Known names and parameters:
//   sphere_uniform
//   state_aligned            sign = +1 | -1 (default +1)
//   gaussian_iid_truncated
//   state_cancel_residual    beta in [0, 1] (default 0.5)
// Throws ValidationError for unknown names or bad parameters.
JammerStrategy make_strategy(const std::string& name, const StrategyParams& params = {});

std::vector<std::string> strategy_names();

// Every shipped strategy with the parameter settings used by the
// verification experiments.
std::vector<JammerStrategy> shipped_strategies();

}  // namespace avc
