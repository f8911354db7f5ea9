#include "cpicert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpicert {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpherePoint::SpherePoint(const Vec5& raw) {
  const double n = norm(raw);
  if (!(n > 1e-13) || !std::isfinite(n))
    throw ConfigError("cannot project a (near-)zero 5-vector onto S^4");
  c_ = scale(raw, 1.0 / n);
}

SpherePoint SpherePoint::axis(int i, double sign) {
  Vec5 v{};
  v[i] = sign;
  return SpherePoint(v);
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& x) {
  const double d = 2.0 * std::atan2(norm(sub(a.coords(), x.coords())),
                                    norm(add(a.coords(), x.coords())));
  return std::clamp(d, 0.0, kPi);
}

double green_round_sphere(const SpherePoint& a, const SpherePoint& x) {
  // 8 pi^2 (1 - cos d) = 4 pi^2 |a-x|^2 exactly; the chordal form stays
  // accurate near the pole.
  const Vec5 diff = sub(a.coords(), x.coords());
  const double chord2 = dot(diff, diff);
  if (chord2 <= 1e-18) throw PoleCoincidence(std::sqrt(chord2));
  return 1.0 / (4.0 * kPi * kPi * chord2);
}

double mass_round_sphere(const SpherePoint&) { return 0.0; }

ManifoldModel round_sphere_model() {
  ManifoldModel m;
  m.green = &green_round_sphere;
  m.mass = &mass_round_sphere;
  m.scalar_coeff = 2.0;
  m.distance = &geodesic_distance;
  return m;
}

TangentFrame tangent_frame(const SpherePoint& a) {
  // Drop the single axis most aligned with a (ties -> lowest index), keep the
  // other four in ascending index order.
  int drop = 0;
  for (int i = 1; i < 5; ++i)
    if (std::abs(a[i]) > std::abs(a[drop])) drop = i;

  TangentFrame frame{a, {}};
  int out = 0;
  for (int i = 0; i < 5; ++i) {
    if (i == drop) continue;
    Vec5 v{};
    v[i] = 1.0;
    // two Gram-Schmidt passes keep the Gram defect near roundoff
    for (int pass = 0; pass < 2; ++pass) {
      v = sub(v, scale(a.coords(), dot(v, a.coords())));
      for (int k = 0; k < out; ++k)
        v = sub(v, scale(frame.vectors[k], dot(v, frame.vectors[k])));
    }
    frame.vectors[out++] = scale(v, 1.0 / norm(v));
  }
  return frame;
}

SpherePoint exp_map(const SpherePoint& a, const Vec5& v) {
  const double defect = std::abs(dot(v, a.coords()));
  if (defect > 1e-10) throw NotTangent(defect);
  const double len = norm(v);
  if (len < 1e-14) return a;
  return SpherePoint(
      add(scale(a.coords(), std::cos(len)), scale(v, std::sin(len) / len)));
}

Vec5 log_map(const SpherePoint& a, const SpherePoint& x) {
  const double d = geodesic_distance(a, x);
  if (d >= kPi - 1e-6) throw CutLocus(d);
  if (d < 1e-14) return Vec5{};
  Vec5 u = sub(x.coords(), scale(a.coords(), dot(a.coords(), x.coords())));
  return scale(u, d / norm(u));
}

}  // namespace cpicert
