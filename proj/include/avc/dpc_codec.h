#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "avc/channel_model.h"
#include "avc/geometry.h"
#include "avc/random.h"

namespace avc {

inline constexpr std::uint64_t kDefaultMaxCodewords = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kDefaultMaxCodebookBytes = std::uint64_t{1} << 30;

// Rates of the binned dirty-paper code. Message indices are 0-based.
struct CodeConfig {
  double rate = 0.0;               // R, bits per channel use
  double binning_rate = 0.0;       // R~, bits per channel use
  double encode_tolerance = 0.2;   // delta_0, per symbol: |<U - a S, S>| <= n delta_0
  SystemParams params;
  std::uint64_t max_codewords = kDefaultMaxCodewords;
  std::uint64_t max_bytes = kDefaultMaxCodebookBytes;
};

std::vector<std::string> validate(const CodeConfig& cfg);

// round(2^(n rate)), at least 1. Returned as a double because at n = 400 the
// count is far outside any integer type; explicit codebooks convert it after
// checking the resource cap.
double codeword_count(std::size_t n, double rate);

struct CodeCounts {
  double bins = 1.0;
  double words_per_bin = 1.0;
  double total() const { return bins * words_per_bin; }
};

CodeCounts code_counts(const CodeConfig& cfg);

// Rates realized after rounding the counts: (log2(bins) / n, log2(words) / n).
std::pair<double, double> effective_rates(const CodeConfig& cfg);

// 2^(nR) bins x 2^(nR~) codewords, each uniform on the sphere of squared
// radius n P_U. Storage is bin-major: codeword (j, k) starts at
// (j * words_per_bin + k) * n.
class Codebook {
 public:
  Codebook(std::size_t n, std::uint64_t bins, std::uint64_t words_per_bin, double codeword_power,
           std::uint64_t seed, std::vector<double> data);

  std::size_t block_length() const { return n_; }
  std::uint64_t bins() const { return bins_; }
  std::uint64_t words_per_bin() const { return words_per_bin_; }
  std::uint64_t size() const { return bins_ * words_per_bin_; }
  double codeword_power() const { return codeword_power_; }
  std::uint64_t seed() const { return seed_; }

  VecView codeword(std::uint64_t bin, std::uint64_t k) const;
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  std::size_t n_;
  std::uint64_t bins_;
  std::uint64_t words_per_bin_;
  double codeword_power_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

// Deterministic in `seed`. Throws ResourceError when the codebook exceeds
// cfg.max_codewords or cfg.max_bytes.
Codebook build_codebook(const CodeConfig& cfg, std::uint64_t seed);

struct EncodeOutcome {
  RealVec x;                          // transmitted signal, zero on failure
  std::optional<std::uint64_t> chosen_k;
  RealVec u;                          // selected codeword, empty on failure
  bool power_rescaled = false;        // ||U - a S||^2 exceeded nP and was scaled back

  bool ok() const { return chosen_k.has_value(); }
};

// Forms X = U - a S from a selected codeword, scaling X back onto the
// power sphere when ||X||^2 > nP.
EncodeOutcome finish_encoding(RealVec u, std::uint64_t k, VecView s, const CodeConfig& cfg);

// Searches bin m for codewords with |<U - a s, s>| <= n delta_0 and picks one
// uniformly. Sends the zero vector when none qualifies.
EncodeOutcome encode(const Codebook& cb, const CodeConfig& cfg, std::uint64_t m, VecView s,
                     Rng& rng);

// Minimum-angle decoder: the bin holding the codeword with the largest
// normalized inner product with y. Ties go to the smallest (bin, word) pair
// and y = 0 decodes to bin 0.
std::uint64_t decode(const Codebook& cb, VecView y);

// Little-endian binary export: magic "AVCCB001", then u64 n, u64 bins,
// u64 words_per_bin, f64 P_U, u64 seed, then the codewords row-major.
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace avc
