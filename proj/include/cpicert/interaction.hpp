#pragma once

#include <vector>

#include "cpicert/critical.hpp"
#include "cpicert/linalg.hpp"

namespace cpicert {

// Record for one nonempty subset tau_p of K+. rho is the least eigenvalue of
// the interaction matrix; iota = p - 1 + sum_i (4 - m(K, y_i)).
struct CpiCandidate {
  std::vector<int> members;  // ascending indices into the K+ list
  double rho = 0.0;
  int iota = 0;
  bool in_f1 = false;  // rho > 0
};

struct F1Set {
  std::vector<CpiCandidate> candidates;  // subset-mask order, all 2^n - 1
  bool h1_ok = false;
  double h1_min_margin = 0.0;        // min |rho| over all subsets
  double h1_min_margin_pairs = 0.0;  // min |rho| over subsets with p <= 2
  double rho_tol = 1e-9;
};

struct H1Report {
  bool pass = false;
  double margin = 0.0;        // min |rho|, all subset sizes
  double margin_pairs = 0.0;  // min |rho| over p <= 2, reported for comparison
  double rho_tol = 1e-9;
  std::vector<int> worst_subset;  // members attaining the margin
};

// Interaction matrix of the given members:
//   M_ii = beta(y_i) / K(y_i),
//   M_ij = -2 G(y_i, y_j) / sqrt(K(y_i) K(y_j))  (i != j).
SymMat build_matrix(const std::vector<CriticalPoint>& members,
                    const ManifoldModel& model);

// Least eigenvalue by the deterministic cyclic Jacobi solver.
double least_eigenvalue(const SymMat& m);

// Every nonempty subset of K+ with its rho, iota and F1 membership. Checks
// Cauchy interlacing (rho anti-monotone under inclusion) along the way.
// Throws TooManyPeaks when |K+| > max_kplus.
F1Set enumerate_candidates(const std::vector<CriticalPoint>& kplus_points,
                           const ManifoldModel& model, double rho_tol = 1e-9,
                           int max_kplus = 20);

H1Report check_H1(const F1Set& f1);

}  // namespace cpicert
