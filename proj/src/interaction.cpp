#include "cpicert/interaction.hpp"

#include <cmath>
#include <stdexcept>

namespace cpicert {

SymMat build_matrix(const std::vector<CriticalPoint>& members,
                    const ManifoldModel& model) {
  const int p = static_cast<int>(members.size());
  SymMat m(p);
  for (int i = 0; i < p; ++i)
    m.set(i, i, members[i].beta / members[i].k_value);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double g = model.green(members[i].location, members[j].location);
      m.set(i, j, -2.0 * g / std::sqrt(members[i].k_value * members[j].k_value));
    }
  }
  return m;
}

double least_eigenvalue(const SymMat& m) {
  return jacobi_eigenvalues(m).front();
}

F1Set enumerate_candidates(const std::vector<CriticalPoint>& kplus_points,
                           const ManifoldModel& model, double rho_tol,
                           int max_kplus) {
  const int n = static_cast<int>(kplus_points.size());
  if (n > max_kplus) throw TooManyPeaks(kplus_points.size(), max_kplus);

  F1Set f1;
  f1.rho_tol = rho_tol;
  f1.h1_min_margin = HUGE_VAL;
  f1.h1_min_margin_pairs = HUGE_VAL;
  if (n == 0) {
    // vacuous (H1)
    f1.h1_ok = true;
    f1.h1_min_margin = 0.0;
    f1.h1_min_margin_pairs = 0.0;
    return f1;
  }

  const std::uint64_t total = (1ULL << n);
  std::vector<double> rho_by_mask(total, 0.0);
  f1.candidates.reserve(total - 1);

  for (std::uint64_t mask = 1; mask < total; ++mask) {
    CpiCandidate cand;
    std::vector<CriticalPoint> members;
    for (int b = 0; b < n; ++b) {
      if (mask & (1ULL << b)) {
        cand.members.push_back(b);
        members.push_back(kplus_points[b]);
      }
    }
    const int p = static_cast<int>(cand.members.size());
    const SymMat m = build_matrix(members, model);
    cand.rho = least_eigenvalue(m);
    cand.iota = p - 1;
    for (const CriticalPoint& y : members) cand.iota += 4 - y.morse_index;
    cand.in_f1 = cand.rho > 0.0;
    rho_by_mask[mask] = cand.rho;

    if (cand.iota < 0 || cand.iota > p - 1 + 4 * p)
      throw std::logic_error("iota out of range");
    if (cand.rho > m.min_diagonal() + 1e-10 * std::max(1.0, std::abs(cand.rho)))
      throw std::logic_error("least eigenvalue exceeds min diagonal entry");

    // Cauchy interlacing: removing a member cannot lower rho
    const double slack = 1e-10 * std::max(1.0, std::abs(cand.rho));
    if (p >= 2) {
      for (int b = 0; b < n; ++b) {
        if (!(mask & (1ULL << b))) continue;
        const std::uint64_t sub = mask & ~(1ULL << b);
        if (rho_by_mask[sub] < cand.rho - slack)
          throw std::logic_error("interlacing violated across subset chain");
      }
    }

    f1.h1_min_margin = std::min(f1.h1_min_margin, std::abs(cand.rho));
    if (p <= 2)
      f1.h1_min_margin_pairs =
          std::min(f1.h1_min_margin_pairs, std::abs(cand.rho));
    f1.candidates.push_back(std::move(cand));
  }

  f1.h1_ok = f1.h1_min_margin > rho_tol;
  return f1;
}

H1Report check_H1(const F1Set& f1) {
  H1Report rep;
  rep.rho_tol = f1.rho_tol;
  rep.margin = f1.candidates.empty() ? 0.0 : f1.h1_min_margin;
  rep.margin_pairs = f1.candidates.empty() ? 0.0 : f1.h1_min_margin_pairs;
  rep.pass = f1.candidates.empty() || rep.margin > f1.rho_tol;
  if (!f1.candidates.empty()) {
    const CpiCandidate* worst = &f1.candidates.front();
    for (const CpiCandidate& c : f1.candidates)
      if (std::abs(c.rho) < std::abs(worst->rho)) worst = &c;
    rep.worst_subset = worst->members;
  }
  return rep;
}

}  // namespace cpicert
