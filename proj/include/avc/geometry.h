#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "avc/random.h"

namespace avc {

// Signal vectors (state, codeword, jamming, noise, channel output) are plain
// contiguous doubles of the block length n.
using RealVec = std::vector<double>;
using VecView = std::span<const double>;

// Parameters of the slice {u : ||u||^2 = radius_sq, <u, anchor> = center_scale}
// of a sphere by a hyperplane orthogonal to the anchor.
struct SphereSliceSpec {
  double center_scale = 0.0;  // z = <u, s>
  RealVec anchor;             // s, nonzero
  double radius_sq = 0.0;     // n * P_U
};

// Sum of a_i * b_i accumulated left to right. Throws DimensionError on a
// length mismatch.
double inner(VecView a, VecView b);

double norm_sq(VecView a);
double norm(VecView a);

// a / ||a||. Throws DegenerateInputError for the zero vector.
RealVec unit(VecView a);

// True when every component is finite.
bool all_finite(VecView a);

// a + scale * b, in place on a.
void axpy(std::span<double> a, double scale, VecView b);

// Removes the component of v along `direction` (need not be unit length) in
// place. A zero direction leaves v untouched.
void project_out(std::span<double> v, VecView direction);

// Uniform point on the sphere of squared radius radius_sq in R^n, drawn as a
// normalized i.i.d. standard Gaussian vector.
RealVec sample_sphere_uniform(std::size_t n, double radius_sq, Rng& rng);

// Uniform point on the slice described by `spec`: the component along s is
// fixed to z s / ||s||^2 and the orthogonal part is uniform on the
// (n-1)-sphere of radius rho = sqrt(radius_sq - z^2 / ||s||^2) inside the
// hyperplane orthogonal to s. Throws GeometryError if the slice is empty.
RealVec sample_sphere_cap_slice(const SphereSliceSpec& spec, Rng& rng);

// Uniform point of squared radius radius_sq restricted to the hyperplane
// orthogonal to `normal`. Falls back to the full sphere when normal is zero.
RealVec sample_sphere_orthogonal(VecView normal, double radius_sq, Rng& rng);

// Law of T = <r, R> for a fixed unit r and R uniform on the unit sphere of
// R^n (n >= 2). (1 + T) / 2 ~ Beta((n-1)/2, (n-1)/2). Both tails are
// evaluated through the lower regularized incomplete beta so that values far
// below 1e-16 keep full relative precision.
class SphereProjectionLaw {
 public:
  explicit SphereProjectionLaw(std::size_t n);

  std::size_t dimension() const { return n_; }

  double cdf(double t) const;   // P(T <= t)
  double tail(double t) const;  // P(T >= t)

  // Probability mass of [lo, hi].
  double mass(double lo, double hi) const;

  // Draws T conditioned on lo <= T <= hi by inversion. Requires mass > 0.
  double sample_truncated(double lo, double hi, Rng& rng) const;

 private:
  std::size_t n_;
  double shape_;
};

}  // namespace avc
