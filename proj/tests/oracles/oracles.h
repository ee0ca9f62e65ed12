#pragma once

// Reference implementations used only by the tests. They deliberately avoid
// the library's code paths: compensated sums instead of plain accumulation,
// Simpson quadrature instead of the incomplete beta, entropies instead of
// the ratio form of mutual information.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// Values computed offline with 50-digit arithmetic for P = Lambda =
// sigma^2 = sigma_S^2 = 1 unless stated otherwise.
namespace frozen {
inline constexpr double kAlpha = 1.0 / 3.0;
inline constexpr double kCodewordPower = 10.0 / 9.0;
inline constexpr double kCapacity = 0.29248125036057811;
inline constexpr double kBinningRate = 0.07600154672252499;
inline constexpr double kTotalRate = 0.36848279708310308;
inline constexpr double kTheta = 0.63245553203367587;
inline constexpr double kFAtOrigin = 0.73029674334022148;       // f(0, 0)
inline constexpr double kCapBound100_05 = 6.5393192157e-7;      // n = 100, gamma = 0.5
inline constexpr double kCapBound50_02 = 0.36782835887;         // n = 50, gamma = 0.2
inline constexpr double kThresholdDelta005 = 0.29891664214;     // -1/2 log2(1 - (theta - 0.05)^2)
inline constexpr double kRateActualN7R02 = 0.22642321439;       // log2(round(2^1.4)) / 7
inline constexpr double kDoubleExpN200 = 0.99999904633;         // (1 - 2^-40)^(2^20)
inline constexpr double kTail50_02 = 0.0797;                    // exact P(T >= 0.2), n = 50
inline constexpr double kTail100_03 = 0.001152;
inline constexpr double kTail100_05 = 5.087e-8;
}  // namespace frozen

inline double kahan_inner(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0, c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double y = a[i] * b[i] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Argmax of <u, y> / (|u| |y|) over all codewords, stored row-major with n
// entries per word, in long double. Returns the word index.
inline std::size_t brute_force_argmax(const std::vector<double>& words, std::size_t n,
                                      const std::vector<double>& y) {
  long double ny = 0;
  for (double v : y) ny += static_cast<long double>(v) * v;
  if (ny == 0) return 0;
  std::size_t best = 0;
  long double best_score = -std::numeric_limits<long double>::infinity();
  for (std::size_t w = 0; w * n < words.size(); ++w) {
    long double dot = 0, nu = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(words[w * n + i]) * y[i];
      nu += static_cast<long double>(words[w * n + i]) * words[w * n + i];
    }
    const long double score = dot / std::sqrt(nu * ny);
    if (score > best_score) {
      best_score = score;
      best = w;
    }
  }
  return best;
}

// P(T <= t) for the first coordinate of a uniform point on the unit sphere in
// R^n, by composite Simpson integration of c_n (1 - x^2)^((n - 3) / 2).
inline double projection_cdf(std::size_t n, double t, std::size_t panels = 2000) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double k = 0.5 * (static_cast<double>(n) - 3.0);
  const double log_c = std::lgamma(0.5 * n) - 0.5 * std::log(M_PI) - std::lgamma(0.5 * (n - 1.0));
  auto density = [&](double x) {
    const double r = 1.0 - x * x;
    if (r <= 0.0) return k < 0 ? 0.0 : (k == 0 ? std::exp(log_c) : 0.0);
    return std::exp(log_c + k * std::log(r));
  };
  // Integrate over the shorter side for accuracy.
  const bool upper = t > 0.0;
  const double a = upper ? t : -1.0, b = upper ? 1.0 : t;
  const double h = (b - a) / static_cast<double>(panels);
  double s = density(a) + density(b);
  for (std::size_t i = 1; i < panels; ++i) s += density(a + h * i) * (i % 2 ? 4.0 : 2.0);
  const double integral = s * h / 3.0;
  return upper ? 1.0 - integral : integral;
}

// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - i / m, (i + 1) / m - f});
  }
  return d;
}

// 1% critical value of the one-sample KS statistic.
inline double ks_critical_01(std::size_t m) { return 1.628 / std::sqrt(static_cast<double>(m)); }

inline double wilson_center(double successes, double trials, double z) {
  return (successes + z * z / 2.0) / (trials + z * z);
}

// ---- discrete max-min ----

struct DiscreteChannel {
  std::size_t nu, nx, ns, nj, ny;
  std::vector<double> ps;
  std::vector<double> w;  // [x][s][j][y]
};

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

// I(U;Y) - I(U;S) = [H(U) + H(Y) - H(U,Y)] - [H(U) + H(S) - H(U,S)].
// enc[s][u][x], jam[s][j] flattened.
inline double objective(const DiscreteChannel& ch, const std::vector<double>& enc,
                        const std::vector<double>& jam) {
  std::vector<double> p_uy(ch.nu * ch.ny, 0.0), p_us(ch.nu * ch.ns, 0.0), p_y(ch.ny, 0.0),
      p_s(ch.ns, 0.0);
  for (std::size_t s = 0; s < ch.ns; ++s) {
    for (std::size_t u = 0; u < ch.nu; ++u) {
      for (std::size_t x = 0; x < ch.nx; ++x) {
        const double pux = ch.ps[s] * enc[(s * ch.nu + u) * ch.nx + x];
        for (std::size_t j = 0; j < ch.nj; ++j) {
          for (std::size_t y = 0; y < ch.ny; ++y) {
            const double p = pux * jam[s * ch.nj + j] * ch.w[((x * ch.ns + s) * ch.nj + j) * ch.ny + y];
            p_uy[u * ch.ny + y] += p;
            p_us[u * ch.ns + s] += p;
            p_y[y] += p;
            p_s[s] += p;
          }
        }
      }
    }
  }
  return entropy(p_y) - entropy(p_uy) - entropy(p_s) + entropy(p_us);
}

// All count vectors of length `parts` summing to `total`, via an odometer
// over every vector in [0, total]^parts and a filter.
inline std::vector<std::vector<double>> simplex_by_filter(std::size_t parts, std::size_t total) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> c(parts, 0);
  while (true) {
    std::size_t sum = 0;
    for (auto v : c) sum += v;
    if (sum == total) {
      std::vector<double> p(parts);
      for (std::size_t i = 0; i < parts; ++i) p[i] = static_cast<double>(c[i]) / total;
      out.push_back(p);
    }
    std::size_t i = 0;
    while (i < parts && c[i] == total) c[i++] = 0;
    if (i == parts) break;
    ++c[i];
  }
  return out;
}

// Concatenations of one grid point per state, all combinations.
inline std::vector<std::vector<double>> product_laws(const std::vector<std::vector<double>>& grid,
                                                     std::size_t states) {
  std::vector<std::vector<double>> out{{}};
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (const auto& g : grid) {
        auto v = prefix;
        v.insert(v.end(), g.begin(), g.end());
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline double max_min(const DiscreteChannel& ch, std::size_t outer, std::size_t inner) {
  const auto encs = product_laws(simplex_by_filter(ch.nu * ch.nx, outer), ch.ns);
  const auto jams = product_laws(simplex_by_filter(ch.nj, inner), ch.ns);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& e : encs) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& j : jams) worst = std::min(worst, objective(ch, e, j));
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace oracle
