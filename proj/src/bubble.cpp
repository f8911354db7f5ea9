#include "cpicert/bubble.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace cpicert {

namespace {

constexpr double kPi = std::numbers::pi;

// Residual of u'' + (3/r) u' + u^3 = 0 for u = c/(1+r^2), by 4th-order
// central differences in long double (the r = 1 evaluation point keeps the
// stencil far from both the origin and the far-field cancellation).
long double radial_residual(long double c, long double r, long double h) {
  const auto u = [c](long double s) { return c / (1.0L + s * s); };
  const long double upp = (-u(r + 2 * h) + 16 * u(r + h) - 30 * u(r) +
                           16 * u(r - h) - u(r - 2 * h)) /
                          (12 * h * h);
  const long double up =
      (-u(r + 2 * h) + 8 * u(r + h) - 8 * u(r - h) + u(r - 2 * h)) / (12 * h);
  return upp + 3.0L * up / r + u(r) * u(r) * u(r);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb,
                        double whole, double eps, int depth,
                        const char* label) {
  if (depth <= 0) throw QuadratureNotConverged(label);
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1,
                          label) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1,
                          label);
}

// Integral_0^inf r^3 (1+r^2)^{-q} dr via the substitution r = t/(1-t).
double radial_integral(int q, const QuadratureConfig& cfg, const char* label) {
  const auto f = [q](double t) {
    if (t >= 1.0) return 0.0;
    const double r = t / (1.0 - t);
    const double w = 1.0 / ((1.0 - t) * (1.0 - t));
    return r * r * r * std::pow(1.0 + r * r, -q) * w;
  };
  const double a = 0.0, b = 1.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = cfg.rel_tol * std::max(std::abs(whole), 1e-3);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, cfg.max_depth,
                          label);
}

}  // namespace

Bubble make_bubble(const std::array<double, 4>& center, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("bubble scale must be positive");
  return Bubble{center, lambda, kBubbleC0};
}

double bubble_value(const Bubble& b, const std::array<double, 4>& x) {
  double r2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = x[i] - b.center[i];
    r2 += d * d;
  }
  return b.c0 * b.lambda / (1.0 + b.lambda * b.lambda * r2);
}

double derive_c0() {
  const long double r = 1.0L;
  const long double h = 1e-3L;
  // R(c) = (c^3 - 8c)/(1+r^2)^3 + O(h^4): negative at 2, positive at 3
  long double lo = 1.0L, hi = 4.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (radial_residual(mid, r, h) < 0.0L)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

double epsilon_ij(double lambda_i, double lambda_j, double dist) {
  if (!(lambda_i > 0.0) || !(lambda_j > 0.0))
    throw ConfigError("epsilon_ij needs positive scales");
  if (dist < 0.0) throw ConfigError("epsilon_ij needs a nonnegative distance");
  return 1.0 / (lambda_i / lambda_j + lambda_j / lambda_i +
                lambda_i * lambda_j * dist * dist);
}

AnalyticConstants compute_constants(const QuadratureConfig& cfg) {
  const double c0_4 = kBubbleC0 * kBubbleC0 * kBubbleC0 * kBubbleC0;  // 64
  const double omega3 = 2.0 * kPi * kPi;
  AnalyticConstants out;
  out.omega3 = omega3;
  out.s4 = c0_4 * omega3 * radial_integral(4, cfg, "S4 integral (q = 4)");
  out.c2 = c0_4 * omega3 * radial_integral(3, cfg, "c2 integral (q = 3)");
  return out;
}

}  // namespace cpicert
