#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "avc/dpc_codec.h"

namespace avc {

// One realization of the randomized code as seen by a trial: an encoder and
// the decoder's decision. Two backends exist:
//
//  * ExplicitCode holds a materialized Codebook and runs the encoder search and
//    the minimum-angle decoder literally.
//  * SampledCode never stores codewords. Codewords are i.i.d. uniform on the
//    sphere, so everything a trial observes can be drawn from exact laws:
//    whether bin m holds a codeword in the encoding window (a binomial
//    event), the selected codeword's projection on s (truncated projection
//    law), its orthogonal part (uniform on the slice), and whether some
//    codeword of another bin beats it at the decoder (the maximum of
//    (bins - 1) * words i.i.d. projections on y). The decision event is
//    "the encoder failed, or some other bin's codeword correlates with y at
//    least as well as the transmitted one", which contains the argmax
//    decoder's error event; the two differ only when a word of bin m other
//    than the transmitted one would have won the decision.
class TransmissionCode {
 public:
  virtual ~TransmissionCode() = default;

  virtual std::string_view backend() const = 0;
  virtual double message_count() const = 0;
  virtual EncodeOutcome encode(std::uint64_t m, VecView s, Rng& rng) const = 0;
  // Decoded bin for the received y given what was sent.
  virtual std::uint64_t decide(VecView y, const EncodeOutcome& sent, std::uint64_t m,
                               Rng& rng) const = 0;
};

class ExplicitCode final : public TransmissionCode {
 public:
  ExplicitCode(std::shared_ptr<const Codebook> codebook, CodeConfig cfg)
      : codebook_(std::move(codebook)), cfg_(std::move(cfg)) {}

  std::string_view backend() const override { return "explicit"; }
  double message_count() const override { return static_cast<double>(codebook_->bins()); }
  EncodeOutcome encode(std::uint64_t m, VecView s, Rng& rng) const override {
    return avc::encode(*codebook_, cfg_, m, s, rng);
  }
  std::uint64_t decide(VecView y, const EncodeOutcome&, std::uint64_t, Rng&) const override {
    return avc::decode(*codebook_, y);
  }

  const Codebook& codebook() const { return *codebook_; }

 private:
  std::shared_ptr<const Codebook> codebook_;
  CodeConfig cfg_;
};

class SampledCode final : public TransmissionCode {
 public:
  // Requires n >= 2.
  explicit SampledCode(CodeConfig cfg);

  std::string_view backend() const override { return "sampled"; }
  double message_count() const override { return counts_.bins; }
  EncodeOutcome encode(std::uint64_t m, VecView s, Rng& rng) const override;
  std::uint64_t decide(VecView y, const EncodeOutcome& sent, std::uint64_t m,
                       Rng& rng) const override;

  // Probability that at least one of `words` i.i.d. codewords lands in the
  // encoding window for state s.
  double encode_success_probability(VecView s) const;

  // Probability that one of the (bins - 1) * words foreign codewords has
  // normalized correlation >= tau with y.
  double confusion_probability(double tau) const;

 private:
  struct Window {
    double lo;
    double hi;
  };
  Window window(double s_sq) const;
  std::uint64_t random_other_bin(std::uint64_t m, Rng& rng) const;

  CodeConfig cfg_;
  CodeCounts counts_;
  double alpha_;
  double radius_sq_;
  SphereProjectionLaw law_;
};

enum class Backend { kAuto, kExplicit, kSampled };

Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend backend);

// Largest codebook kAuto materializes. Explicit decoding costs
// (codewords x n) per trial, so bigger codes go to the sampled backend even
// when they would fit in memory; kExplicit still allows up to max_codewords.
inline constexpr double kAutoExplicitCodewords = 16384.0;

// kAuto picks explicit when the codebook has at most kAutoExplicitCodewords
// words and fits the resource caps.
Backend resolve_backend(Backend requested, const CodeConfig& cfg);

}  // namespace avc
