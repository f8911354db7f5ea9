#pragma once

#include <array>
#include <functional>

#include "cpicert/errors.hpp"
#include "cpicert/linalg.hpp"

namespace cpicert {

using Vec5 = std::array<double, 5>;

// Point on the round unit S^4, stored as a unit 5-vector in ambient
// coordinates. The constructor normalizes, so |coords|^2 = 1 to roundoff
// after every constructing or projecting operation.
class SpherePoint {
 public:
  explicit SpherePoint(const Vec5& raw);
  static SpherePoint axis(int i, double sign = 1.0);

  const Vec5& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }

 private:
  Vec5 c_;
};

// Deterministic orthonormal basis of T_a S^4 (4 ambient 5-vectors, each
// orthogonal to the base point).
struct TangentFrame {
  SpherePoint base;
  std::array<Vec5, 4> vectors;
};

// Geometry provider consumed by the rest of the pipeline. green/mass are the
// conformal-Laplacian Green's function and the constant term of its
// conformal-coordinate expansion at the pole; scalar_coeff is the zero-order
// coefficient of L (2 on the round unit S^4, where L = -Lap + 2).
struct ManifoldModel {
  std::function<double(const SpherePoint&, const SpherePoint&)> green;
  std::function<double(const SpherePoint&)> mass;
  double scalar_coeff = 2.0;
  std::function<double(const SpherePoint&, const SpherePoint&)> distance;
};

// arccos(<a,x>) clamped to [0, pi], computed as 2*atan2(|a-x|, |a+x|) which
// is accurate at both ends of the range.
double geodesic_distance(const SpherePoint& a, const SpherePoint& x);

// G(a,x) = 1/(8 pi^2 (1 - cos d)) = 1/(4 pi^2 |a-x|^2).
//
// Normalization: L G(a,.) = delta_a, i.e. the leading singularity is
// 1/(4 pi^2 d^2), matching the fundamental solution of -Lap in flat R^4.
// Throws PoleCoincidence when d <= 1e-9.
double green_round_sphere(const SpherePoint& a, const SpherePoint& x);

// Regular part of G at the pole in conformal normal coordinates. Identically
// zero on the round sphere: stereographic coordinates are conformal and the
// flat fundamental solution carries no constant term.
double mass_round_sphere(const SpherePoint& a);

ManifoldModel round_sphere_model();

// Gram-Schmidt on the 4 ambient axes least aligned with a (ties broken by
// lowest axis index). Deterministic: equal inputs give bit-identical frames.
TangentFrame tangent_frame(const SpherePoint& a);

// cos(|v|) a + sin(|v|) v/|v|; returns a when |v| < 1e-14. Throws NotTangent
// when |<v,a>| > 1e-10.
SpherePoint exp_map(const SpherePoint& a, const Vec5& v);

// Inverse of exp_map. Throws CutLocus when d(a,x) >= pi - 1e-6.
Vec5 log_map(const SpherePoint& a, const SpherePoint& x);

}  // namespace cpicert
