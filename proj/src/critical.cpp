#include "cpicert/critical.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cpicert/linalg.hpp"
#include "cpicert/sampling.hpp"

namespace cpicert {

namespace {

SpherePoint retract(const SpherePoint& p, const std::array<double, 4>& s,
                    const TangentFrame& frame) {
  Vec5 q = p.coords();
  for (int k = 0; k < 4; ++k) q = add(q, scale(frame.vectors[k], s[k]));
  return SpherePoint(q);  // retraction by normalization
}

double grad_norm_at(const ScalarField& f, const SpherePoint& p) {
  const AmbientDerivatives amb = f.ambient_derivatives(p.coords());
  const Vec5 g = sub(amb.grad, scale(p.coords(), dot(amb.grad, p.coords())));
  return norm(g);
}

// Damped projected Newton on the zero set of the intrinsic gradient, with a
// Levenberg-style diagonal shift as fallback near singular Hessians. Starts
// that fail to make progress are discarded by the caller.
std::optional<SpherePoint> polish(const ScalarField& f, SpherePoint p,
                                  const SearchConfig& cfg) {
  double mu = 0.0;
  for (int it = 0; it < cfg.max_newton_iters; ++it) {
    const TangentFrame frame = tangent_frame(p);
    const IntrinsicDerivatives d = f.intrinsic_derivatives(p, frame);
    const double gn = norm(d.grad);
    if (gn < cfg.grad_tol) return p;

    double hscale = 1e-12;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) hscale = std::max(hscale, std::abs(d.hess[k][l]));

    bool accepted = false;
    double mu_try = mu;
    for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
      std::vector<double> a(16);
      std::vector<double> rhs(4);
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) a[k * 4 + l] = d.hess[k][l];
        a[k * 4 + k] += mu_try;
        rhs[k] = -d.grad[k];
      }
      const auto sol = solve_dense(4, std::move(a), std::move(rhs));
      if (!sol) {
        mu_try = (mu_try == 0.0) ? 1e-4 * hscale : 8.0 * mu_try;
        continue;
      }
      std::array<double, 4> s{(*sol)[0], (*sol)[1], (*sol)[2], (*sol)[3]};
      const double sn = norm(s);
      if (sn > 0.7) s = scale(s, 0.7 / sn);

      const SpherePoint q = retract(p, s, frame);
      const double gq = grad_norm_at(f, q);
      if (gq < cfg.grad_tol || gq <= gn * (1.0 - 1e-4)) {
        p = q;
        mu = mu_try * 0.25;
        accepted = true;
      } else {
        mu_try = (mu_try == 0.0) ? 1e-4 * hscale : 8.0 * mu_try;
      }
    }
    if (!accepted) return std::nullopt;
  }
  if (grad_norm_at(f, p) < cfg.grad_tol) return p;
  return std::nullopt;
}

bool canonical_less(const CriticalPoint& a, const CriticalPoint& b) {
  if (a.k_value != b.k_value) return a.k_value > b.k_value;
  return a.location.coords() < b.location.coords();
}

CriticalPoint classify(const ScalarField& f, const ManifoldModel& model,
                       const SpherePoint& p, const SearchConfig& cfg) {
  const TangentFrame frame = tangent_frame(p);
  const IntrinsicDerivatives d = f.intrinsic_derivatives(p, frame);

  SymMat h(4);
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) h.set(k, l, d.hess[k][l]);
  const std::vector<double> eig = jacobi_eigenvalues(h);

  double min_abs = std::abs(eig[0]);
  int negatives = 0;
  for (double e : eig) {
    min_abs = std::min(min_abs, std::abs(e));
    if (e < 0.0) ++negatives;
  }
  if (min_abs <= cfg.nondegeneracy_tol)
    throw DegenerateCriticalPoint(p.coords(), min_abs);

  CriticalPoint cp{p};
  cp.k_value = d.value;
  cp.morse_index = negatives;
  cp.laplacian = d.laplace_beltrami;
  cp.mass = model.mass(p);
  cp.beta = -cp.laplacian / (3.0 * cp.k_value) - 2.0 * cp.mass;
  for (int k = 0; k < 4; ++k) cp.hess_eigenvalues[k] = eig[k];
  cp.grad_norm = norm(d.grad);
  return cp;
}

}  // namespace

CriticalSet find_critical_points(const ScalarField& f,
                                 const ManifoldModel& model,
                                 const SearchConfig& cfg) {
  if (cfg.starts < 1) throw ConfigError("search needs starts >= 1");

  int starts = cfg.starts;
  long long last_sum = 0;
  for (int round = 0; round <= cfg.max_escalations; ++round, starts *= 2) {
    std::vector<SpherePoint> converged;
    converged.reserve(starts);
    for (int i = 0; i < starts; ++i) {
      const SpherePoint start{sphere_sample(static_cast<std::uint64_t>(i),
                                            cfg.seed)};
      if (auto hit = polish(f, start, cfg)) converged.push_back(*hit);
    }

    // classify first (sorting needs k_value), then merge in canonical order
    // against the accepted representatives
    std::vector<CriticalPoint> classified;
    classified.reserve(converged.size());
    for (const SpherePoint& p : converged)
      classified.push_back(classify(f, model, p, cfg));
    std::sort(classified.begin(), classified.end(), canonical_less);

    CriticalSet cs;
    cs.starts_used = starts;
    for (const CriticalPoint& cand : classified) {
      bool merged = false;
      for (const CriticalPoint& rep : cs.points) {
        if (geodesic_distance(cand.location, rep.location) < cfg.merge_tol) {
          merged = true;
          break;
        }
      }
      if (!merged) cs.points.push_back(cand);
    }

    cs.poincare_hopf_sum = 0;
    for (const CriticalPoint& p : cs.points)
      cs.poincare_hopf_sum += (p.morse_index % 2 == 0) ? 1 : -1;
    last_sum = cs.poincare_hopf_sum;

    if (cs.poincare_hopf_sum == 2 && !cs.points.empty()) {
      for (std::size_t i = 0; i < cs.points.size(); ++i)
        if (cs.points[i].beta > 0.0) cs.kplus_indices.push_back(static_cast<int>(i));
      return cs;
    }
  }
  throw IncompleteSearch(last_sum, starts / 2);
}

H0Report verify_H0(const CriticalSet& cs, const SearchConfig& cfg) {
  H0Report rep;
  rep.pass = true;
  rep.min_abs_eigenvalue = HUGE_VAL;
  rep.min_abs_beta = HUGE_VAL;
  rep.max_grad_norm = 0.0;
  for (std::size_t i = 0; i < cs.points.size(); ++i) {
    const CriticalPoint& p = cs.points[i];
    H0Entry e;
    e.point = static_cast<int>(i);
    e.min_abs_eigenvalue = HUGE_VAL;
    for (double ev : p.hess_eigenvalues)
      e.min_abs_eigenvalue = std::min(e.min_abs_eigenvalue, std::abs(ev));
    e.abs_beta = std::abs(p.beta);
    e.grad_norm = p.grad_norm;
    e.nondegenerate_ok = e.min_abs_eigenvalue > cfg.nondegeneracy_tol;
    e.beta_ok = e.abs_beta > cfg.beta_tol;
    e.grad_ok = e.grad_norm < cfg.grad_tol;
    rep.pass = rep.pass && e.nondegenerate_ok && e.beta_ok && e.grad_ok;
    rep.min_abs_eigenvalue = std::min(rep.min_abs_eigenvalue, e.min_abs_eigenvalue);
    rep.min_abs_beta = std::min(rep.min_abs_beta, e.abs_beta);
    rep.max_grad_norm = std::max(rep.max_grad_norm, e.grad_norm);
    rep.entries.push_back(e);
  }
  return rep;
}

std::vector<CriticalPoint> kplus(const CriticalSet& cs) {
  std::vector<CriticalPoint> out;
  out.reserve(cs.kplus_indices.size());
  for (int i : cs.kplus_indices) out.push_back(cs.points[i]);
  return out;
}

}  // namespace cpicert
