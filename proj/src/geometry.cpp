#include "avc/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "avc/error.h"

namespace avc {

double inner(VecView a, VecView b) {
  if (a.size() != b.size()) {
    throw DimensionError("inner: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(VecView a) { return inner(a, a); }

double norm(VecView a) { return std::sqrt(norm_sq(a)); }

RealVec unit(VecView a) {
  const double len = norm(a);
  if (!(len > 0.0)) throw DegenerateInputError("unit: zero vector has no direction");
  RealVec out(a.begin(), a.end());
  for (double& v : out) v /= len;
  return out;
}

bool all_finite(VecView a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

void axpy(std::span<double> a, double scale, VecView b) {
  if (a.size() != b.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

void project_out(std::span<double> v, VecView direction) {
  const double dd = norm_sq(direction);
  if (!(dd > 0.0)) return;
  axpy(v, -inner(v, direction) / dd, direction);
}

namespace {

void scale_to_radius(RealVec& v, double radius_sq) {
  const double len_sq = norm_sq(v);
  const double factor = std::sqrt(radius_sq / len_sq);
  for (double& x : v) x *= factor;
}

}  // namespace

RealVec sample_sphere_uniform(std::size_t n, double radius_sq, Rng& rng) {
  if (n == 0) throw DimensionError("sample_sphere_uniform: n must be >= 1");
  if (!(radius_sq > 0.0)) throw DomainError("sample_sphere_uniform: radius_sq must be > 0");
  RealVec v(n);
  double len_sq = 0.0;
  // A Gaussian vector is zero with probability zero; redraw to be total.
  while (!(len_sq > 0.0)) {
    for (double& x : v) x = rng.gaussian();
    len_sq = norm_sq(v);
  }
  scale_to_radius(v, radius_sq);
  return v;
}

RealVec sample_sphere_orthogonal(VecView normal, double radius_sq, Rng& rng) {
  const std::size_t n = normal.size();
  if (!(norm_sq(normal) > 0.0)) return sample_sphere_uniform(n, radius_sq, rng);
  if (n < 2) throw GeometryError("sample_sphere_orthogonal: complement of a line in R^1 is {0}");
  RealVec v(n);
  double len_sq = 0.0;
  while (!(len_sq > 0.0)) {
    for (double& x : v) x = rng.gaussian();
    project_out(v, normal);
    len_sq = norm_sq(v);
  }
  scale_to_radius(v, radius_sq);
  // One more pass removes the rounding residue left along the normal.
  project_out(v, normal);
  return v;
}

RealVec sample_sphere_cap_slice(const SphereSliceSpec& spec, Rng& rng) {
  const VecView s = spec.anchor;
  const std::size_t n = s.size();
  if (n == 0) throw DimensionError("sample_sphere_cap_slice: empty anchor");
  if (!(spec.radius_sq > 0.0)) throw DomainError("sample_sphere_cap_slice: radius_sq must be > 0");
  const double s_sq = norm_sq(s);
  if (!(s_sq > 0.0)) throw GeometryError("sample_sphere_cap_slice: anchor must be nonzero");

  const double z = spec.center_scale;
  const double along_sq = z * z / s_sq;
  double rho_sq = spec.radius_sq - along_sq;
  // Within rounding of the tangent point the slice is a single point.
  const double tol = 1e-12 * spec.radius_sq;
  if (rho_sq < -tol) {
    throw GeometryError("sample_sphere_cap_slice: empty slice, z^2/||s||^2 = " +
                        std::to_string(along_sq) + " exceeds radius_sq = " +
                        std::to_string(spec.radius_sq));
  }
  if (rho_sq <= tol) rho_sq = 0.0;

  RealVec u(s.begin(), s.end());
  for (double& x : u) x *= z / s_sq;
  if (rho_sq == 0.0) return u;
  if (n == 1) throw GeometryError("sample_sphere_cap_slice: n = 1 admits only the tangent point");

  const RealVec orth = sample_sphere_orthogonal(s, rho_sq, rng);
  axpy(u, 1.0, orth);
  return u;
}

SphereProjectionLaw::SphereProjectionLaw(std::size_t n)
    : n_(n), shape_(0.5 * (static_cast<double>(n) - 1.0)) {
  if (n < 2) throw DomainError("SphereProjectionLaw: n must be >= 2");
}

double SphereProjectionLaw::cdf(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t <= 0.0) return boost::math::ibeta(shape_, shape_, 0.5 * (1.0 + t));
  return 1.0 - tail(t);
}

double SphereProjectionLaw::tail(double t) const {
  if (t <= -1.0) return 1.0;
  if (t >= 1.0) return 0.0;
  if (t >= 0.0) return boost::math::ibeta(shape_, shape_, 0.5 * (1.0 - t));
  return 1.0 - cdf(t);
}

double SphereProjectionLaw::mass(double lo, double hi) const {
  lo = std::clamp(lo, -1.0, 1.0);
  hi = std::clamp(hi, -1.0, 1.0);
  if (!(hi > lo)) return 0.0;
  if (lo >= 0.0) return tail(lo) - tail(hi);
  if (hi <= 0.0) return cdf(hi) - cdf(lo);
  return 1.0 - cdf(lo) - tail(hi);
}

double SphereProjectionLaw::sample_truncated(double lo, double hi, Rng& rng) const {
  lo = std::clamp(lo, -1.0, 1.0);
  hi = std::clamp(hi, -1.0, 1.0);
  if (!(mass(lo, hi) > 0.0)) throw DomainError("sample_truncated: interval has no mass");
  const double w = rng.uniform();
  double t;
  if (lo >= 0.0) {
    const double q_hi = tail(hi);
    const double q = q_hi + (tail(lo) - q_hi) * w;
    t = 1.0 - 2.0 * boost::math::ibeta_inv(shape_, shape_, q);
  } else {
    const double f_lo = cdf(lo);
    const double f = f_lo + (cdf(hi) - f_lo) * w;
    if (f <= 0.5) {
      t = 2.0 * boost::math::ibeta_inv(shape_, shape_, f) - 1.0;
    } else {
      t = 1.0 - 2.0 * boost::math::ibeta_inv(shape_, shape_, 1.0 - f);
    }
  }
  return std::clamp(t, lo, hi);
}

}  // namespace avc
