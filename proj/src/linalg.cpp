#include "cpicert/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cpicert {

std::vector<double> jacobi_eigenvalues(SymMat m) {
  const int n = m.size();
  std::vector<double> a(m.data());
  auto at = [&](int i, int j) -> double& { return a[i * n + j]; };

  const double total = m.frobenius_norm();
  const double target = 1e-12 * total;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * at(p, q) * at(p, q);
    return std::sqrt(s);
  };

  if (total > 0.0) {
    for (int sweep = 0; sweep < 64 && off_norm() > target; ++sweep) {
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const double apq = at(p, q);
          if (std::abs(apq) <= 1e-300) continue;
          const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
          double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const double tau = s / (1.0 + c);

          const double h = t * apq;
          at(p, p) -= h;
          at(q, q) += h;
          at(p, q) = 0.0;
          at(q, p) = 0.0;
          for (int j = 0; j < n; ++j) {
            if (j == p || j == q) continue;
            const double ajp = at(j, p);
            const double ajq = at(j, q);
            at(j, p) = ajp - s * (ajq + ajp * tau);
            at(p, j) = at(j, p);
            at(j, q) = ajq + s * (ajp - ajq * tau);
            at(q, j) = at(j, q);
          }
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::optional<std::vector<double>> solve_dense(int n, std::vector<double> a,
                                               std::vector<double> b) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-14 * std::max(scale, 1e-30);

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (std::abs(a[piv * n + k]) < tiny) return std::nullopt;
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      a[i * n + k] = 0.0;
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

}  // namespace cpicert
