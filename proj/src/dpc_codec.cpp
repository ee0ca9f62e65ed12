#include "avc/dpc_codec.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "avc/error.h"

namespace avc {

std::vector<std::string> validate(const CodeConfig& cfg) {
  auto problems = validate(cfg.params);
  if (!std::isfinite(cfg.rate) || cfg.rate < 0.0) problems.push_back("rate: must be finite and >= 0");
  if (!std::isfinite(cfg.binning_rate) || cfg.binning_rate < 0.0)
    problems.push_back("binning_rate: must be finite and >= 0");
  if (!std::isfinite(cfg.encode_tolerance) || !(cfg.encode_tolerance > 0.0))
    problems.push_back("encode_tolerance: must be finite and > 0");
  return problems;
}

double codeword_count(std::size_t n, double rate) {
  const double c = std::round(std::exp2(static_cast<double>(n) * rate));
  return c < 1.0 ? 1.0 : c;
}

CodeCounts code_counts(const CodeConfig& cfg) {
  const std::size_t n = cfg.params.block_length;
  return {codeword_count(n, cfg.rate), codeword_count(n, cfg.binning_rate)};
}

std::pair<double, double> effective_rates(const CodeConfig& cfg) {
  const auto counts = code_counts(cfg);
  const double n = static_cast<double>(cfg.params.block_length);
  return {std::log2(counts.bins) / n, std::log2(counts.words_per_bin) / n};
}

Codebook::Codebook(std::size_t n, std::uint64_t bins, std::uint64_t words_per_bin,
                   double codeword_power, std::uint64_t seed, std::vector<double> data)
    : n_(n),
      bins_(bins),
      words_per_bin_(words_per_bin),
      codeword_power_(codeword_power),
      seed_(seed),
      data_(std::move(data)) {
  if (data_.size() != n_ * bins_ * words_per_bin_) {
    throw DimensionError("Codebook: data size does not match n * bins * words_per_bin");
  }
}

VecView Codebook::codeword(std::uint64_t bin, std::uint64_t k) const {
  return VecView(data_).subspan((bin * words_per_bin_ + k) * n_, n_);
}

Codebook build_codebook(const CodeConfig& cfg, std::uint64_t seed) {
  require_valid(cfg.params);
  const std::size_t n = cfg.params.block_length;
  const auto counts = code_counts(cfg);
  const double total = counts.total();
  const double bytes = total * static_cast<double>(n) * sizeof(double);
  if (total > static_cast<double>(cfg.max_codewords) || bytes > static_cast<double>(cfg.max_bytes)) {
    throw ResourceError("codebook needs " + std::to_string(total) + " codewords (" +
                        std::to_string(bytes) + " bytes); cap is " +
                        std::to_string(cfg.max_codewords) + " codewords / " +
                        std::to_string(cfg.max_bytes) + " bytes");
  }
  const auto bins = static_cast<std::uint64_t>(counts.bins);
  const auto words = static_cast<std::uint64_t>(counts.words_per_bin);
  const double pu = derive_constants(cfg.params).codeword_power;
  const double radius_sq = static_cast<double>(n) * pu;

  Rng rng(seed);
  std::vector<double> data;
  data.reserve(bins * words * n);
  for (std::uint64_t i = 0; i < bins * words; ++i) {
    const RealVec u = sample_sphere_uniform(n, radius_sq, rng);
    data.insert(data.end(), u.begin(), u.end());
  }
  return Codebook(n, bins, words, pu, seed, std::move(data));
}

EncodeOutcome finish_encoding(RealVec u, std::uint64_t k, VecView s, const CodeConfig& cfg) {
  const double alpha = derive_constants(cfg.params).alpha;
  EncodeOutcome out;
  out.x = u;
  axpy(out.x, -alpha, s);
  const double budget = static_cast<double>(cfg.params.block_length) * cfg.params.power;
  const double x_sq = norm_sq(out.x);
  if (x_sq > budget) {
    const double factor = std::sqrt(budget / x_sq);
    for (double& v : out.x) v *= factor;
    out.power_rescaled = true;
  }
  out.u = std::move(u);
  out.chosen_k = k;
  return out;
}

EncodeOutcome encode(const Codebook& cb, const CodeConfig& cfg, std::uint64_t m, VecView s,
                     Rng& rng) {
  if (m >= cb.bins()) {
    throw ValidationError("encode: message index " + std::to_string(m) + " out of range [0, " +
                          std::to_string(cb.bins()) + ")");
  }
  if (s.size() != cb.block_length()) throw DimensionError("encode: state length != n");

  const double alpha = derive_constants(cfg.params).alpha;
  const double n = static_cast<double>(cb.block_length());
  const double s_sq = norm_sq(s);
  const double threshold = n * cfg.encode_tolerance;

  std::vector<std::uint64_t> candidates;
  for (std::uint64_t k = 0; k < cb.words_per_bin(); ++k) {
    // <U - a s, s> = <U, s> - a ||s||^2
    const double gap = inner(cb.codeword(m, k), s) - alpha * s_sq;
    if (std::abs(gap) <= threshold) candidates.push_back(k);
  }
  if (candidates.empty()) {
    EncodeOutcome failed;
    failed.x.assign(cb.block_length(), 0.0);
    return failed;
  }
  const std::uint64_t k = candidates[rng.uniform_index(candidates.size())];
  const VecView word = cb.codeword(m, k);
  return finish_encoding(RealVec(word.begin(), word.end()), k, s, cfg);
}

std::uint64_t decode(const Codebook& cb, VecView y) {
  if (y.size() != cb.block_length()) throw DimensionError("decode: received length != n");
  if (!(norm_sq(y) > 0.0)) return 0;
  // Every codeword has norm sqrt(n P_U) and dividing by ||y|| is monotone, so
  // the argmax of <y^, u^> is the argmax of the raw inner product <y, u>.
  std::uint64_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < cb.size(); ++idx) {
    const double score = inner(y, cb.data().subspan(idx * cb.block_length(), cb.block_length()));
    if (score > best_score) {
      best_score = score;
      best = idx;
    }
  }
  return best / cb.words_per_bin();
}

namespace {

constexpr char kMagic[8] = {'A', 'V', 'C', 'C', 'B', '0', '0', '1'};

template <typename T>
void write_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

template <typename T>
T read_le(std::istream& is) {
  static_assert(sizeof(T) == 8);
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) throw IoError("codebook file truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  write_le<std::uint64_t>(os, cb.block_length());
  write_le<std::uint64_t>(os, cb.bins());
  write_le<std::uint64_t>(os, cb.words_per_bin());
  write_le<double>(os, cb.codeword_power());
  write_le<std::uint64_t>(os, cb.seed());
  for (double v : cb.data()) write_le<double>(os, v);
  if (!os) throw IoError("write failed for " + path.string());
}

Codebook load_codebook(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw IoError(path.string() + " is not a codebook file");
  }
  const auto n = read_le<std::uint64_t>(is);
  const auto bins = read_le<std::uint64_t>(is);
  const auto words = read_le<std::uint64_t>(is);
  const auto pu = read_le<double>(is);
  const auto seed = read_le<std::uint64_t>(is);
  if (n == 0 || bins == 0 || words == 0 || bins > kDefaultMaxCodewords * 64 ||
      words > kDefaultMaxCodewords * 64) {
    throw IoError(path.string() + ": implausible codebook header");
  }
  std::vector<double> data(n * bins * words);
  for (double& v : data) v = read_le<double>(is);
  return Codebook(n, bins, words, pu, seed, std::move(data));
}

}  // namespace avc
