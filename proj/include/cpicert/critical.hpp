#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cpicert/field.hpp"
#include "cpicert/geometry.hpp"

namespace cpicert {

struct SearchConfig {
  int starts = 4096;
  std::uint64_t seed = 0;
  double grad_tol = 1e-9;
  double merge_tol = 1e-5;
  double nondegeneracy_tol = 1e-7;
  double beta_tol = 1e-9;
  int max_newton_iters = 50;
  int max_escalations = 2;  // extra rounds with doubled starts when the
                            // Poincare-Hopf check fails
};

// Classified critical point of K on S^4. beta is the criticality quantity
//   beta(y) = -LapK(y) / (3 K(y)) - 2 A_y,
// whose sign selects membership in K+.
struct CriticalPoint {
  SpherePoint location;
  double k_value = 0.0;
  int morse_index = 0;
  double laplacian = 0.0;
  double mass = 0.0;
  double beta = 0.0;
  std::array<double, 4> hess_eigenvalues{};  // ascending
  double grad_norm = 0.0;                    // residual at convergence
};

struct CriticalSet {
  // canonical order: descending k_value, ties by lexicographic coordinates
  std::vector<CriticalPoint> points;
  std::vector<int> kplus_indices;  // beta > 0, preserving canonical order
  long long poincare_hopf_sum = 0;
  int starts_used = 0;
};

struct H0Entry {
  int point = 0;
  double min_abs_eigenvalue = 0.0;
  double abs_beta = 0.0;
  double grad_norm = 0.0;
  bool nondegenerate_ok = false;
  bool beta_ok = false;
  bool grad_ok = false;
};

struct H0Report {
  bool pass = false;
  double min_abs_eigenvalue = 0.0;  // over all points
  double min_abs_beta = 0.0;
  double max_grad_norm = 0.0;
  std::vector<H0Entry> entries;
};

// Multi-start projected-Newton search over the whole sphere. Throws
// DegenerateCriticalPoint when a converged point violates the nondegeneracy
// tolerance, IncompleteSearch when the Poincare-Hopf sum still differs from
// chi(S^4) = 2 after the escalation rounds.
CriticalSet find_critical_points(const ScalarField& f,
                                 const ManifoldModel& model,
                                 const SearchConfig& cfg);

// Both clauses of (H0) on every point: nondegenerate Hessian and |beta|
// above tolerance. Violations are reported, never thrown.
H0Report verify_H0(const CriticalSet& cs, const SearchConfig& cfg);

std::vector<CriticalPoint> kplus(const CriticalSet& cs);

}  // namespace cpicert
