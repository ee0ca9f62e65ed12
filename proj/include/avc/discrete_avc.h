#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace avc::discrete {

inline constexpr std::size_t kMaxAlphabet = 4;

// Finite AVC with a random state S ~ P_S and an adversarial input J:
// W(y | x, s, j). The auxiliary alphabet size |U| is a free input.
class DiscreteAvcSpec {
 public:
  DiscreteAvcSpec(std::size_t u_size, std::size_t x_size, std::size_t s_size, std::size_t j_size,
                  std::size_t y_size, std::vector<double> state_law, std::vector<double> kernel);

  std::size_t u_size() const { return u_; }
  std::size_t x_size() const { return x_; }
  std::size_t s_size() const { return s_; }
  std::size_t j_size() const { return j_; }
  std::size_t y_size() const { return y_; }
  const std::vector<double>& state_law() const { return state_law_; }

  double kernel(std::size_t x, std::size_t s, std::size_t j, std::size_t y) const {
    return kernel_[((x * s_ + s) * j_ + j) * y_ + y];
  }

 private:
  std::size_t u_, x_, s_, j_, y_;
  std::vector<double> state_law_;
  std::vector<double> kernel_;  // [x][s][j][y]
};

// Encoder law P(u, x | s), stored [s][u][x].
struct EncoderLaw {
  std::size_t s_size = 0, u_size = 0, x_size = 0;
  std::vector<double> p;
  double operator()(std::size_t s, std::size_t u, std::size_t x) const {
    return p[(s * u_size + u) * x_size + x];
  }
};

// Jammer law P(j | s), stored [s][j].
struct JammerLaw {
  std::size_t s_size = 0, j_size = 0;
  std::vector<double> p;
  double operator()(std::size_t s, std::size_t j) const { return p[s * j_size + j]; }
};

// I(U;Y) - I(U;S) in bits under the joint P_S(s) P(u,x|s) V(y|x,s), with
// V(y|x,s) = sum_j W(y|x,s,j) P(j|s). Uses 0 log 0 = 0. Throws
// ValidationError when either law is not a conditional distribution.
double evaluate_objective(const DiscreteAvcSpec& spec, const EncoderLaw& encoder,
                          const JammerLaw& jammer);

// All points of the probability simplex over `parts` outcomes whose
// coordinates are multiples of 1 / resolution, in lexicographic order of the
// integer compositions.
std::vector<std::vector<double>> simplex_grid(std::size_t parts, std::size_t resolution);

struct CapacityResult {
  double value = 0.0;           // max over encoder grid of min over jammer grid
  double min_max = 0.0;         // min over jammer grid of max over encoder grid
  double duality_gap = 0.0;     // min_max - value, >= 0
  EncoderLaw argmax_encoder;
  JammerLaw argmin_jammer;      // inner minimizer at the argmax encoder
  std::size_t outer_resolution = 0;
  std::size_t inner_resolution = 0;
  std::size_t outer_points = 0;
  std::size_t inner_points = 0;
};

// Exhaustive max-min over product simplex grids (one simplex per state for
// each law). Ties keep the first grid point. Resolutions must be >= 5; a
// grid larger than max_evaluations objective calls is a ResourceError.
CapacityResult solve_capacity(const DiscreteAvcSpec& spec, std::size_t outer_resolution,
                              std::size_t inner_resolution, std::size_t threads = 1,
                              double max_evaluations = 2e9);

// JSON spec: {"u_size": k (optional, defaults to |X|), "state_law": [...],
//             "kernel": W[x][s][j][y]}
DiscreteAvcSpec parse_spec(const nlohmann::json& doc);
DiscreteAvcSpec load_spec(const std::filesystem::path& path);
nlohmann::json to_json(const DiscreteAvcSpec& spec);
nlohmann::json to_json(const CapacityResult& result);

}  // namespace avc::discrete
