#include "avc/code_backend.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "avc/error.h"

namespace avc {

SampledCode::SampledCode(CodeConfig cfg)
    : cfg_(std::move(cfg)),
      counts_(code_counts(cfg_)),
      alpha_(derive_constants(cfg_.params).alpha),
      radius_sq_(static_cast<double>(cfg_.params.block_length) *
                 derive_constants(cfg_.params).codeword_power),
      law_(cfg_.params.block_length) {}

SampledCode::Window SampledCode::window(double s_sq) const {
  // |<U, s> - a ||s||^2| <= n delta_0, expressed on t = <U^, s^>.
  const double n = static_cast<double>(cfg_.params.block_length);
  const double scale = std::sqrt(radius_sq_ * s_sq);
  const double center = alpha_ * s_sq;
  const double slack = n * cfg_.encode_tolerance;
  return {(center - slack) / scale, (center + slack) / scale};
}

double SampledCode::encode_success_probability(VecView s) const {
  const double s_sq = norm_sq(s);
  if (!(s_sq > 0.0)) return 1.0;
  const auto w = window(s_sq);
  const double p = law_.mass(w.lo, w.hi);
  if (p >= 1.0) return 1.0;
  return -std::expm1(counts_.words_per_bin * std::log1p(-p));
}

double SampledCode::confusion_probability(double tau) const {
  const double rivals = (counts_.bins - 1.0) * counts_.words_per_bin;
  if (rivals <= 0.0) return 0.0;
  const double q = law_.tail(tau);
  if (q >= 1.0) return 1.0;
  return -std::expm1(rivals * std::log1p(-q));
}

EncodeOutcome SampledCode::encode(std::uint64_t m, VecView s, Rng& rng) const {
  if (static_cast<double>(m) >= counts_.bins) {
    throw ValidationError("encode: message index " + std::to_string(m) + " out of range");
  }
  const std::size_t n = cfg_.params.block_length;
  if (s.size() != n) throw DimensionError("encode: state length != n");

  const auto word_label = [&] {
    const double cap = 9007199254740992.0;  // 2^53
    return rng.uniform_index(static_cast<std::uint64_t>(std::min(counts_.words_per_bin, cap)));
  };

  const double s_sq = norm_sq(s);
  if (!(s_sq > 0.0)) {
    // Zero state: every codeword satisfies the condition.
    const std::uint64_t k = word_label();
    return finish_encoding(sample_sphere_uniform(n, radius_sq_, rng), k, s, cfg_);
  }

  if (!rng.bernoulli(encode_success_probability(s))) {
    EncodeOutcome failed;
    failed.x.assign(n, 0.0);
    return failed;
  }
  const auto w = window(s_sq);
  const double t = law_.sample_truncated(w.lo, w.hi, rng);
  SphereSliceSpec slice;
  slice.center_scale = t * std::sqrt(radius_sq_ * s_sq);
  slice.anchor.assign(s.begin(), s.end());
  slice.radius_sq = radius_sq_;
  RealVec u = sample_sphere_cap_slice(slice, rng);
  const std::uint64_t k = word_label();
  return finish_encoding(std::move(u), k, s, cfg_);
}

std::uint64_t SampledCode::random_other_bin(std::uint64_t m, Rng& rng) const {
  const double cap = 9007199254740992.0;
  const auto others = static_cast<std::uint64_t>(std::min(counts_.bins - 1.0, cap));
  const std::uint64_t r = rng.uniform_index(others);
  return r < m ? r : r + 1;
}

std::uint64_t SampledCode::decide(VecView y, const EncodeOutcome& sent, std::uint64_t m,
                                  Rng& rng) const {
  if (counts_.bins <= 1.0) return 0;
  if (!(norm_sq(y) > 0.0)) return 0;
  // An encoder failure counts as a decoding error. Under the explicit decoder
  // the bin's words are then conditioned to be poorly aligned with s, which y
  // contains, so bin m loses far more often than a uniform guess would.
  if (!sent.ok()) return random_other_bin(m, rng);
  const double tau = inner(y, sent.u) / (norm(y) * norm(sent.u));
  if (rng.bernoulli(confusion_probability(tau))) return random_other_bin(m, rng);
  return m;
}

Backend parse_backend(std::string_view name) {
  if (name == "auto") return Backend::kAuto;
  if (name == "explicit") return Backend::kExplicit;
  if (name == "sampled") return Backend::kSampled;
  throw ValidationError("unknown code backend '" + std::string(name) +
                        "' (expected auto, explicit or sampled)");
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kAuto: return "auto";
    case Backend::kExplicit: return "explicit";
    case Backend::kSampled: return "sampled";
  }
  return "auto";
}

Backend resolve_backend(Backend requested, const CodeConfig& cfg) {
  if (requested != Backend::kAuto) return requested;
  const auto counts = code_counts(cfg);
  const double bytes =
      counts.total() * static_cast<double>(cfg.params.block_length) * sizeof(double);
  const double limit = std::min(static_cast<double>(cfg.max_codewords), kAutoExplicitCodewords);
  const bool fits = counts.total() <= limit && bytes <= static_cast<double>(cfg.max_bytes);
  if (fits || cfg.params.block_length < 2) return Backend::kExplicit;
  return Backend::kSampled;
}

}  // namespace avc
