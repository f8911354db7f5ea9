#pragma once

#include <array>

#include "cpicert/errors.hpp"

namespace cpicert {

// Standard bubble in a flat 4-dimensional chart,
//   delta_{a,lambda}(x) = c0 * lambda / (1 + lambda^2 |x - a|^2),
// with c0 = 2*sqrt(2) so that -Lap delta = delta^3 on R^4.
struct Bubble {
  std::array<double, 4> center{};
  double lambda = 1.0;
  double c0 = 0.0;  // filled by make_bubble
};

// n(n-2) = 8 at n = 4, i.e. c0^2 = 8.
inline constexpr double kBubbleC0 = 2.8284271247461902976;  // 2*sqrt(2)

Bubble make_bubble(const std::array<double, 4>& center, double lambda);

// Radial profile c0*lambda/(1 + lambda^2 r^2); templated so verification code
// can instantiate the same formula at extended precision.
template <class Real>
inline Real bubble_profile(Real c0, Real lambda, Real r) {
  return c0 * lambda / (Real(1) + lambda * lambda * r * r);
}

double bubble_value(const Bubble& b, const std::array<double, 4>& x);

// Recovers c0 numerically: the coefficient c for which c/(1+r^2) solves
// -Lap u = u^3, found by root-bracketing the finite-difference residual of
// the radial equation u'' + (3/r) u' + u^3 = 0.
double derive_c0();

// eps_ij = (li/lj + lj/li + li*lj*d^2)^{-1}. Symmetric, decreasing in d,
// range (0, 1/2].
double epsilon_ij(double lambda_i, double lambda_j, double dist);

struct AnalyticConstants {
  double s4 = 0.0;      // c0^4 * Integral_{R^4} (1+|x|^2)^{-4} = 32 pi^2 / 3
  double c2 = 0.0;      // c0^4 * Integral_{R^4} (1+|x|^2)^{-3} = 32 pi^2
  double omega3 = 0.0;  // volume of the unit 3-sphere, 2 pi^2
};

struct QuadratureConfig {
  double rel_tol = 1e-12;
  int max_depth = 48;
};

// Adaptive-quadrature evaluation of the two radial integrals. Throws
// QuadratureNotConverged when the recursion depth limit is hit.
AnalyticConstants compute_constants(const QuadratureConfig& cfg = {});

}  // namespace cpicert
