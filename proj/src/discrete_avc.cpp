#include "avc/discrete_avc.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "json.hpp"

#include "avc/error.h"
#include "avc/parallel.h"

namespace avc::discrete {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_alphabet(const char* name, std::size_t size) {
  if (size < 1 || size > kMaxAlphabet) {
    throw ResourceError(std::string("alphabet ") + name + " has size " + std::to_string(size) +
                        "; supported sizes are 1.." + std::to_string(kMaxAlphabet));
  }
}

void check_distribution(const double* p, std::size_t size, const std::string& what) {
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i])) throw ValidationError(what + ": negative or non-finite entry");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError(what + ": sums to " + std::to_string(sum) + ", not 1");
  }
}

double plogp_ratio(double joint, double a, double b) {
  if (joint <= 0.0) return 0.0;
  return joint * std::log2(joint / (a * b));
}

}  // namespace

DiscreteAvcSpec::DiscreteAvcSpec(std::size_t u_size, std::size_t x_size, std::size_t s_size,
                                 std::size_t j_size, std::size_t y_size,
                                 std::vector<double> state_law, std::vector<double> kernel)
    : u_(u_size),
      x_(x_size),
      s_(s_size),
      j_(j_size),
      y_(y_size),
      state_law_(std::move(state_law)),
      kernel_(std::move(kernel)) {
  check_alphabet("U", u_);
  check_alphabet("X", x_);
  check_alphabet("S", s_);
  check_alphabet("J", j_);
  check_alphabet("Y", y_);
  if (state_law_.size() != s_) throw ValidationError("state_law: expected |S| entries");
  if (kernel_.size() != x_ * s_ * j_ * y_) throw ValidationError("kernel: expected |X||S||J||Y| entries");
  check_distribution(state_law_.data(), s_, "state_law");
  for (std::size_t row = 0; row < x_ * s_ * j_; ++row) {
    check_distribution(kernel_.data() + row * y_, y_, "kernel row " + std::to_string(row));
  }
}

double evaluate_objective(const DiscreteAvcSpec& spec, const EncoderLaw& encoder,
                          const JammerLaw& jammer) {
  const std::size_t nu = spec.u_size(), nx = spec.x_size(), ns = spec.s_size(),
                    nj = spec.j_size(), ny = spec.y_size();
  if (encoder.s_size != ns || encoder.u_size != nu || encoder.x_size != nx ||
      encoder.p.size() != ns * nu * nx) {
    throw ValidationError("encoder law shape does not match the spec");
  }
  if (jammer.s_size != ns || jammer.j_size != nj || jammer.p.size() != ns * nj) {
    throw ValidationError("jammer law shape does not match the spec");
  }
  for (std::size_t s = 0; s < ns; ++s) {
    check_distribution(encoder.p.data() + s * nu * nx, nu * nx, "P(u,x|s=" + std::to_string(s) + ")");
    check_distribution(jammer.p.data() + s * nj, nj, "P(j|s=" + std::to_string(s) + ")");
  }

  // p(u, s, y) = P_S(s) sum_x P(u,x|s) sum_j W(y|x,s,j) P(j|s)
  std::vector<double> joint(nu * ns * ny, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    const double ps = spec.state_law()[s];
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        double v = 0.0;
        for (std::size_t j = 0; j < nj; ++j) v += spec.kernel(x, s, j, y) * jammer(s, j);
        if (v == 0.0) continue;
        for (std::size_t u = 0; u < nu; ++u) joint[(u * ns + s) * ny + y] += ps * encoder(s, u, x) * v;
      }
    }
  }

  std::vector<double> pu(nu, 0.0), ps(ns, 0.0), py(ny, 0.0), puy(nu * ny, 0.0), pus(nu * ns, 0.0);
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double p = joint[(u * ns + s) * ny + y];
        pu[u] += p;
        ps[s] += p;
        py[y] += p;
        puy[u * ny + y] += p;
        pus[u * ns + s] += p;
      }
    }
  }
  double i_uy = 0.0, i_us = 0.0;
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t y = 0; y < ny; ++y) i_uy += plogp_ratio(puy[u * ny + y], pu[u], py[y]);
    for (std::size_t s = 0; s < ns; ++s) i_us += plogp_ratio(pus[u * ns + s], pu[u], ps[s]);
  }
  return i_uy - i_us;
}

std::vector<std::vector<double>> simplex_grid(std::size_t parts, std::size_t resolution) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> counts(parts, 0);
  const double step = 1.0 / static_cast<double>(resolution);
  // Recursive enumeration of compositions of `resolution` into `parts`.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == parts) {
      counts[pos] = left;
      std::vector<double> point(parts);
      for (std::size_t i = 0; i < parts; ++i) point[i] = static_cast<double>(counts[i]) * step;
      out.push_back(std::move(point));
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

namespace {

// Product of one simplex grid per state; `index` is mixed radix with the
// first state most significant.
template <typename Law>
Law product_point(const std::vector<std::vector<double>>& grid, std::size_t states,
                  std::size_t index, Law law) {
  law.p.resize(states * grid.front().size());
  std::size_t rem = index;
  for (std::size_t s = states; s-- > 0;) {
    const auto& point = grid[rem % grid.size()];
    rem /= grid.size();
    std::copy(point.begin(), point.end(), law.p.begin() + static_cast<std::ptrdiff_t>(s * point.size()));
  }
  return law;
}

std::size_t checked_power(std::size_t base, std::size_t exp) {
  double r = 1.0;
  for (std::size_t i = 0; i < exp; ++i) r *= static_cast<double>(base);
  if (r > 1e15) throw ResourceError("grid has " + std::to_string(r) + " points");
  return static_cast<std::size_t>(r);
}

}  // namespace

CapacityResult solve_capacity(const DiscreteAvcSpec& spec, std::size_t outer_resolution,
                              std::size_t inner_resolution, std::size_t threads,
                              double max_evaluations) {
  if (outer_resolution < 5 || inner_resolution < 5) {
    throw ValidationError("solve_capacity: grid resolutions must be >= 5");
  }
  const std::size_t ns = spec.s_size();
  const auto outer_grid = simplex_grid(spec.u_size() * spec.x_size(), outer_resolution);
  const auto inner_grid = simplex_grid(spec.j_size(), inner_resolution);
  const std::size_t outer_points = checked_power(outer_grid.size(), ns);
  const std::size_t inner_points = checked_power(inner_grid.size(), ns);
  const double evaluations = static_cast<double>(outer_points) * static_cast<double>(inner_points);
  if (evaluations > max_evaluations) {
    throw ResourceError("solve_capacity: " + std::to_string(evaluations) +
                        " objective evaluations exceed the cap of " +
                        std::to_string(max_evaluations));
  }

  const EncoderLaw encoder_shape{ns, spec.u_size(), spec.x_size(), {}};
  const JammerLaw jammer_shape{ns, spec.j_size(), {}};
  std::vector<JammerLaw> jammers;
  jammers.reserve(inner_points);
  for (std::size_t k = 0; k < inner_points; ++k) {
    jammers.push_back(product_point(inner_grid, ns, k, jammer_shape));
  }

  struct Chunk {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_outer = 0;
    std::size_t best_inner = 0;
    std::vector<double> column_max;
  };
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (outer_points + kChunk - 1) / kChunk;
  std::vector<Chunk> partial(chunks);

  parallel_for(chunks, threads, [&](std::size_t c) {
    Chunk& ch = partial[c];
    ch.column_max.assign(inner_points, -std::numeric_limits<double>::infinity());
    const std::size_t end = std::min(outer_points, (c + 1) * kChunk);
    for (std::size_t o = c * kChunk; o < end; ++o) {
      const EncoderLaw enc = product_point(outer_grid, ns, o, encoder_shape);
      double row_min = std::numeric_limits<double>::infinity();
      std::size_t row_arg = 0;
      for (std::size_t k = 0; k < inner_points; ++k) {
        const double v = evaluate_objective(spec, enc, jammers[k]);
        if (v < row_min) {
          row_min = v;
          row_arg = k;
        }
        if (v > ch.column_max[k]) ch.column_max[k] = v;
      }
      if (row_min > ch.best) {
        ch.best = row_min;
        ch.best_outer = o;
        ch.best_inner = row_arg;
      }
    }
  });

  CapacityResult out;
  out.outer_resolution = outer_resolution;
  out.inner_resolution = inner_resolution;
  out.outer_points = outer_points;
  out.inner_points = inner_points;
  out.value = -std::numeric_limits<double>::infinity();
  std::size_t best_outer = 0, best_inner = 0;
  std::vector<double> column_max(inner_points, -std::numeric_limits<double>::infinity());
  for (const auto& ch : partial) {
    if (ch.best > out.value) {
      out.value = ch.best;
      best_outer = ch.best_outer;
      best_inner = ch.best_inner;
    }
    for (std::size_t k = 0; k < inner_points; ++k) column_max[k] = std::max(column_max[k], ch.column_max[k]);
  }
  out.min_max = *std::min_element(column_max.begin(), column_max.end());
  out.duality_gap = out.min_max - out.value;
  out.argmax_encoder = product_point(outer_grid, ns, best_outer, encoder_shape);
  out.argmin_jammer = jammers[best_inner];
  return out;
}

DiscreteAvcSpec parse_spec(const nlohmann::json& doc) {
  try {
    const auto& kernel = doc.at("kernel");
    const auto& law = doc.at("state_law");
    const std::size_t nx = kernel.size();
    if (nx == 0) throw ValidationError("kernel: empty");
    const std::size_t ns = kernel[0].size();
    if (ns == 0) throw ValidationError("kernel: empty state axis");
    const std::size_t nj = kernel[0][0].size();
    if (nj == 0) throw ValidationError("kernel: empty jammer axis");
    const std::size_t ny = kernel[0][0][0].size();
    std::vector<double> flat;
    for (std::size_t x = 0; x < nx; ++x) {
      if (kernel[x].size() != ns) throw ValidationError("kernel: ragged state axis");
      for (std::size_t s = 0; s < ns; ++s) {
        if (kernel[x][s].size() != nj) throw ValidationError("kernel: ragged jammer axis");
        for (std::size_t j = 0; j < nj; ++j) {
          if (kernel[x][s][j].size() != ny) throw ValidationError("kernel: ragged output axis");
          for (std::size_t y = 0; y < ny; ++y) flat.push_back(kernel[x][s][j][y].get<double>());
        }
      }
    }
    const std::size_t nu = doc.value("u_size", nx);
    return DiscreteAvcSpec(nu, nx, ns, nj, ny, law.get<std::vector<double>>(), std::move(flat));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("discrete spec: ") + e.what());
  }
}

DiscreteAvcSpec load_spec(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return parse_spec(doc);
}

nlohmann::json to_json(const DiscreteAvcSpec& spec) {
  nlohmann::json kernel = nlohmann::json::array();
  for (std::size_t x = 0; x < spec.x_size(); ++x) {
    nlohmann::json xs = nlohmann::json::array();
    for (std::size_t s = 0; s < spec.s_size(); ++s) {
      nlohmann::json ss = nlohmann::json::array();
      for (std::size_t j = 0; j < spec.j_size(); ++j) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t y = 0; y < spec.y_size(); ++y) row.push_back(spec.kernel(x, s, j, y));
        ss.push_back(row);
      }
      xs.push_back(ss);
    }
    kernel.push_back(xs);
  }
  return {{"u_size", spec.u_size()}, {"state_law", spec.state_law()}, {"kernel", kernel}};
}

nlohmann::json to_json(const CapacityResult& r) {
  return {
      {"value_bits", r.value},
      {"min_max_bits", r.min_max},
      {"duality_gap_bits", r.duality_gap},
      {"outer_resolution", r.outer_resolution},
      {"inner_resolution", r.inner_resolution},
      {"outer_points", r.outer_points},
      {"inner_points", r.inner_points},
      {"note", "grid value at the stated resolutions, not the exact capacity"},
      {"argmax_encoder_p_ux_given_s", r.argmax_encoder.p},
      {"argmin_jammer_p_j_given_s", r.argmin_jammer.p},
  };
}

}  // namespace avc::discrete
