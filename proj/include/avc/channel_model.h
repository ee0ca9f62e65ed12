#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "avc/geometry.h"
#include "avc/random.h"

namespace avc {

// The five scalars defining one channel instance. Rates and logs are in bits.
struct SystemParams {
  double power = 1.0;           // P, encoder power per symbol
  double jammer_power = 1.0;    // Lambda, jammer power per symbol
  double noise_var = 1.0;       // sigma^2
  double state_var = 1.0;       // sigma_S^2
  std::size_t block_length = 1; // n

  bool operator==(const SystemParams&) const = default;
};

// Returns a list of violated constraints (empty when valid).
std::vector<std::string> validate(const SystemParams& params);

// Throws ValidationError listing every violation.
void require_valid(const SystemParams& params);

struct DerivedConstants {
  double alpha = 0.0;         // P / (P + Lambda + sigma^2)
  double codeword_power = 0.0;// P_U = P + alpha^2 sigma_S^2
  double theta = 0.0;         // sqrt(alpha (P + alpha sigma_S^2) / P_U)
  double capacity = 0.0;      // C = 1/2 log2(1 + P / (Lambda + sigma^2))
  double binning_rate = 0.0;  // C~ = 1/2 log2(P_U / P)
  double total_rate = 0.0;    // C_U = C + C~
};

DerivedConstants derive_constants(const SystemParams& params);

// i.i.d. N(0, sigma_S^2) state of length n.
RealVec sample_state(const SystemParams& params, Rng& rng);

// i.i.d. N(0, sigma^2) noise of length n.
RealVec sample_noise(const SystemParams& params, Rng& rng);

// Y = X + S + J + Z.
RealVec transmit(VecView x, VecView s, VecView j, VecView z);

}  // namespace avc
