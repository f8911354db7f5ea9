#pragma once

#include <array>
#include <random>

#include "cpicert/geometry.hpp"

namespace cpicert::testutil {

using Mat5 = std::array<std::array<double, 5>, 5>;

inline Vec5 random_unit5(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec5 v;
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : v) {
      x = n(rng);
      norm2 += x * x;
    }
  } while (norm2 < 1e-12);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

// Gram-Schmidt of a random Gaussian matrix: Haar-ish orthogonal 5x5.
inline Mat5 random_orthogonal5(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat5 q;
  for (int i = 0; i < 5; ++i) {
    Vec5 v;
    for (double& x : v) x = n(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < i; ++k) v = sub(v, scale(q[k], dot(v, q[k])));
    q[i] = scale(v, 1.0 / norm(v));
  }
  return q;
}

inline Vec5 apply(const Mat5& q, const Vec5& v) {
  Vec5 r{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r[i] += q[i][j] * v[j];
  return r;
}

inline Vec5 apply_transpose(const Mat5& q, const Vec5& v) {
  Vec5 r{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r[i] += q[j][i] * v[j];
  return r;
}

inline const char* kQuadricSource =
    "3 + 0.0625*x1^2 + 0.125*x2^2 + 0.25*x3^2 + 0.5*x4^2 + x5^2";
inline const char* kAffineSource = "2 + x5";

}  // namespace cpicert::testutil
