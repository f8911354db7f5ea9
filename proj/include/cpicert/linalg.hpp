#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace cpicert {

template <std::size_t N>
inline double dot(const std::array<double, N>& a,
                  const std::array<double, N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
inline double norm(const std::array<double, N>& a) {
  return std::sqrt(dot(a, a));
}

template <std::size_t N>
inline std::array<double, N> add(const std::array<double, N>& a,
                                 const std::array<double, N>& b) {
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
inline std::array<double, N> sub(const std::array<double, N>& a,
                                 const std::array<double, N>& b) {
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
inline std::array<double, N> scale(const std::array<double, N>& a, double c) {
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = c * a[i];
  return r;
}

// Dense symmetric matrix, full row-major storage. set() writes both mirror
// entries so the stored matrix is symmetric bit-for-bit.
class SymMat {
 public:
  explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  static SymMat diagonal(const std::vector<double>& d) {
    SymMat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m.a_[i * m.n_ + i] = d[i];
    return m;
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return a_[i * n_ + j]; }
  void set(int i, int j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  double min_diagonal() const {
    double m = a_[0];
    for (int i = 1; i < n_; ++i) m = std::min(m, a_[i * n_ + i]);
    return m;
  }

  const std::vector<double>& data() const { return a_; }

 private:
  int n_;
  std::vector<double> a_;
};

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sweeping
// (p,q) in row-major order until the off-diagonal Frobenius norm drops below
// 1e-12 * ||m||_F. Returned ascending. Deterministic for identical input.
std::vector<double> jacobi_eigenvalues(SymMat m);

// Solves A x = b for small dense A (row-major, overwritten) by Gaussian
// elimination with partial pivoting. Empty result when A is numerically
// singular.
std::optional<std::vector<double>> solve_dense(int n, std::vector<double> a,
                                               std::vector<double> b);

}  // namespace cpicert
