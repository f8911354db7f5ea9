#include "cpicert/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "cpicert/version.hpp"

namespace cpicert {

namespace {

using nlohmann::ordered_json;

ordered_json vec_json(const Vec5& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["field"] = cfg.field_source;
  if (cfg.manifold == RunConfig::ManifoldKind::kRoundS4) {
    j["manifold"] = {{"type", "round_s4"}};
  } else {
    j["manifold"] = {{"type", "table"}, {"path", cfg.table_path}};
  }
  j["seed"] = cfg.seed;
  j["starts"] = cfg.starts;
  j["max_newton_iters"] = cfg.max_newton_iters;
  j["max_kplus"] = cfg.max_kplus;
  j["positivity_samples"] = cfg.positivity_samples;
  j["tolerances"] = {{"grad_tol", cfg.tol.grad_tol},
                     {"merge_tol", cfg.tol.merge_tol},
                     {"nondegeneracy_tol", cfg.tol.nondegeneracy_tol},
                     {"beta_tol", cfg.tol.beta_tol},
                     {"rho_tol", cfg.tol.rho_tol},
                     {"flow_tol", cfg.tol.flow_tol}};
  j["flow"] = {{"horizon", cfg.flow.horizon},
               {"s0", cfg.flow.s0},
               {"basin_radius", cfg.flow.basin_radius}};
  ordered_json mu = ordered_json::array();
  for (const MuAssertionInput& m : cfg.mu)
    mu.push_back({{"subset", m.subset}, {"value", m.value}});
  j["mu"] = mu;
  return j;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["kind"] = verdict_name(v);
  if (v.kind == Verdict::Kind::kExistenceWithBound) {
    j["k_min"] = v.k_min;
    j["morse_bound"] = v.morse_bound;
    j["multiplicity_at_least"] = v.multiplicity;
  } else if (v.kind == Verdict::Kind::kExistenceByCorollary) {
    j["multiplicity_at_least"] = v.multiplicity;
  }
  j["conditional"] = v.conditional;
  if (!v.annotation.empty()) j["annotation"] = v.annotation;
  return j;
}

}  // namespace

std::string verdict_name(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::kExistenceWithBound:
      return "ExistenceWithBound";
    case Verdict::Kind::kExistenceByCorollary:
      return "ExistenceByCorollary";
    case Verdict::Kind::kNoConclusion:
      return "NoConclusion";
  }
  return "NoConclusion";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::ordered_json report_json(const AnalysisResult& res) {
  ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["inputs"] = config_json(res.config);

  j["positivity"] = {{"min_value", res.positivity.min_value},
                     {"location", vec_json(res.positivity.location.coords())},
                     {"samples", res.positivity.samples}};

  ordered_json points = ordered_json::array();
  for (std::size_t i = 0; i < res.critical.points.size(); ++i) {
    const CriticalPoint& p = res.critical.points[i];
    ordered_json pj;
    pj["name"] = res.names[i];
    pj["alias"] = res.aliases[i];
    pj["coords"] = vec_json(p.location.coords());
    pj["k_value"] = p.k_value;
    pj["morse_index"] = p.morse_index;
    pj["laplacian"] = p.laplacian;
    pj["mass"] = p.mass;
    pj["beta"] = p.beta;
    ordered_json eig = ordered_json::array();
    for (double e : p.hess_eigenvalues) eig.push_back(e);
    pj["hess_eigenvalues"] = eig;
    pj["grad_norm"] = p.grad_norm;
    points.push_back(pj);
  }
  j["critical_points"] = points;
  j["poincare_hopf"] = {{"sum", res.critical.poincare_hopf_sum},
                        {"expected", 2},
                        {"starts_used", res.critical.starts_used}};

  ordered_json h0;
  h0["pass"] = res.h0.pass;
  h0["min_abs_hessian_eigenvalue"] = res.h0.min_abs_eigenvalue;
  h0["min_abs_beta"] = res.h0.min_abs_beta;
  h0["max_grad_norm"] = res.h0.max_grad_norm;
  ordered_json h0v = ordered_json::array();
  for (const H0Entry& e : res.h0.entries) {
    if (e.nondegenerate_ok && e.beta_ok && e.grad_ok) continue;
    h0v.push_back({{"point", res.names[e.point]},
                   {"min_abs_eigenvalue", e.min_abs_eigenvalue},
                   {"abs_beta", e.abs_beta},
                   {"grad_norm", e.grad_norm}});
  }
  h0["violations"] = h0v;
  j["h0"] = h0;

  ordered_json kp = ordered_json::array();
  for (int i : res.critical.kplus_indices) kp.push_back(res.names[i]);
  j["kplus"] = kp;

  if (res.f1) {
    const ManifoldModel model = make_model(res.config);
    ordered_json cands = ordered_json::array();
    for (const CpiCandidate& c : res.f1->candidates) {
      ordered_json cj;
      ordered_json members = ordered_json::array();
      std::vector<CriticalPoint> pts;
      for (int m : c.members) {
        members.push_back(res.names[res.critical.kplus_indices[m]]);
        pts.push_back(res.kplus_points[m]);
      }
      cj["members"] = members;
      const SymMat mat = build_matrix(pts, model);
      ordered_json rows = ordered_json::array();
      for (int r = 0; r < mat.size(); ++r) {
        ordered_json row = ordered_json::array();
        for (int s = 0; s < mat.size(); ++s) row.push_back(mat(r, s));
        rows.push_back(row);
      }
      cj["matrix"] = rows;
      cj["rho"] = c.rho;
      cj["iota"] = c.iota;
      cj["in_f1"] = c.in_f1;
      cands.push_back(cj);
    }
    j["candidates"] = cands;
  }

  if (res.h1) {
    ordered_json h1;
    h1["pass"] = res.h1->pass;
    h1["min_abs_rho"] = res.h1->margin;
    h1["min_abs_rho_pairs_only"] = res.h1->margin_pairs;
    h1["rho_tol"] = res.h1->rho_tol;
    ordered_json worst = ordered_json::array();
    for (int m : res.h1->worst_subset)
      worst.push_back(res.names[res.critical.kplus_indices[m]]);
    h1["worst_subset"] = worst;
    j["h1"] = h1;
  }

  if (res.certificate) {
    const Certificate& c = *res.certificate;
    ordered_json cj;
    ordered_json hist = ordered_json::array();
    for (const auto& [iota, count] : c.index_histogram)
      hist.push_back({{"iota", iota}, {"count", count}});
    cj["histogram"] = hist;
    cj["total_sum"] = c.total_sum;
    cj["degree"] = c.degree;
    cj["l_sharp"] = c.l_sharp;
    cj["partial_sums"] = c.partial_sums;
    cj["admissible_k"] = c.admissible_k;
    cj["verdict"] = verdict_json(c.verdict);
    if (res.general_verdict)
      cj["verdict_with_mu"] = verdict_json(*res.general_verdict);
    j["certificate"] = cj;
  }

  j["caveats"] = res.caveats;
  j["exit_code"] = res.exit_code;
  return j;
}

std::string report_text(const AnalysisResult& res) {
  std::ostringstream out;
  out << kToolName << " " << kToolVersion << " report\n";
  out << "==========================================================\n";
  out << "field: " << res.config.field_source << "\n";
  out << "manifold: "
      << (res.config.manifold == RunConfig::ManifoldKind::kRoundS4
              ? "round_s4"
              : "table(" + res.config.table_path + ")")
      << "\n";
  out << "seed: " << res.config.seed << "  starts: " << res.config.starts
      << "\n";
  out << "tolerances: grad=" << format_double(res.config.tol.grad_tol)
      << " merge=" << format_double(res.config.tol.merge_tol)
      << " nondeg=" << format_double(res.config.tol.nondegeneracy_tol)
      << " beta=" << format_double(res.config.tol.beta_tol)
      << " rho=" << format_double(res.config.tol.rho_tol) << "\n\n";

  out << "positivity: min K = " << format_double(res.positivity.min_value)
      << " (" << res.positivity.samples << " samples)\n\n";

  out << "critical points (" << res.critical.points.size()
      << "), Poincare-Hopf sum " << res.critical.poincare_hopf_sum << ":\n";
  for (std::size_t i = 0; i < res.critical.points.size(); ++i) {
    const CriticalPoint& p = res.critical.points[i];
    out << "  " << res.names[i];
    if (!res.aliases[i].empty()) out << " (" << res.aliases[i] << ")";
    out << ": K=" << format_double(p.k_value) << " morse=" << p.morse_index
        << " lap=" << format_double(p.laplacian)
        << " A=" << format_double(p.mass)
        << " beta=" << format_double(p.beta) << "\n";
  }
  out << "\n(H0): " << (res.h0.pass ? "pass" : "FAIL")
      << "  min|eig|=" << format_double(res.h0.min_abs_eigenvalue)
      << "  min|beta|=" << format_double(res.h0.min_abs_beta) << "\n";

  out << "K+ = {";
  for (std::size_t k = 0; k < res.critical.kplus_indices.size(); ++k) {
    if (k) out << ", ";
    const int i = res.critical.kplus_indices[k];
    out << res.names[i];
    if (!res.aliases[i].empty()) out << "(" << res.aliases[i] << ")";
  }
  out << "}\n\n";

  if (res.f1) {
    out << "candidates (" << res.f1->candidates.size() << "):\n";
    for (const CpiCandidate& c : res.f1->candidates) {
      out << "  {";
      for (std::size_t m = 0; m < c.members.size(); ++m) {
        if (m) out << ",";
        const int i = res.critical.kplus_indices[c.members[m]];
        out << (res.aliases[i].empty() ? res.names[i] : res.aliases[i]);
      }
      out << "}: rho=" << format_double(c.rho) << " iota=" << c.iota
          << (c.in_f1 ? " [F1]" : "") << "\n";
    }
    out << "\n";
  }
  if (res.h1) {
    out << "(H1): " << (res.h1->pass ? "pass" : "FAIL")
        << "  min|rho|=" << format_double(res.h1->margin)
        << " (pairs-only reading: " << format_double(res.h1->margin_pairs)
        << ")\n\n";
  }

  if (res.certificate) {
    const Certificate& c = *res.certificate;
    out << "certificate:\n  histogram:";
    for (const auto& [iota, count] : c.index_histogram)
      out << " " << iota << ":" << count;
    out << "\n  partial sums S_0..S_" << (c.l_sharp + 1) << ":";
    for (long long s : c.partial_sums) out << " " << s;
    out << "\n  total_sum=" << c.total_sum << "  degree=" << c.degree
        << "  l#=" << c.l_sharp << "\n  admissible k:";
    if (c.admissible_k.empty()) out << " none";
    for (int k : c.admissible_k) out << " " << k;
    out << "\n  verdict: " << verdict_name(c.verdict);
    if (c.verdict.kind == Verdict::Kind::kExistenceWithBound)
      out << " (morse <= " << c.verdict.morse_bound << ", multiplicity >= "
          << c.verdict.multiplicity << ")";
    if (c.verdict.kind == Verdict::Kind::kExistenceByCorollary)
      out << " (multiplicity >= " << c.verdict.multiplicity << ")";
    if (!c.verdict.annotation.empty()) out << " -- " << c.verdict.annotation;
    out << "\n";
    if (res.general_verdict) {
      out << "  verdict with mu: " << verdict_name(*res.general_verdict);
      if (res.general_verdict->kind == Verdict::Kind::kExistenceWithBound)
        out << " (morse <= " << res.general_verdict->morse_bound
            << ", multiplicity >= " << res.general_verdict->multiplicity << ")";
      if (res.general_verdict->conditional) out << " [conditional]";
      out << "\n";
    }
  }

  out << "\ncaveats:\n";
  for (const std::string& c : res.caveats) out << "  - " << c << "\n";
  out << "\nexit code: " << res.exit_code << "\n";
  return out.str();
}

nlohmann::ordered_json constants_json(const AnalyticConstants& c, double c0) {
  const double pi = std::numbers::pi;
  ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["c0"] = {{"value", c0},
             {"closed_form", "2*sqrt(2)"},
             {"provenance", "root of the radial equation -Lap u = u^3 for "
                            "u = c/(1+r^2)"}};
  j["S4"] = {{"value", c.s4},
             {"closed_form", "32*pi^2/3"},
             {"closed_form_value", 32.0 * pi * pi / 3.0},
             {"provenance",
              "c0^4 * Integral_{R^4} (1+|x|^2)^{-4}, adaptive quadrature"}};
  j["c2"] = {{"value", c.c2},
             {"closed_form", "32*pi^2"},
             {"closed_form_value", 32.0 * pi * pi},
             {"provenance",
              "c0^4 * Integral_{R^4} (1+|x|^2)^{-3}, adaptive quadrature"}};
  j["omega3"] = {{"value", c.omega3},
                 {"closed_form", "2*pi^2"},
                 {"provenance", "volume of the unit 3-sphere"}};
  return j;
}

std::string constants_text(const AnalyticConstants& c, double c0) {
  const double pi = std::numbers::pi;
  std::ostringstream out;
  out << "constant  value                 closed form    provenance\n";
  out << "c0        " << format_double(c0)
      << "        2*sqrt(2)      radial equation -Lap u = u^3\n";
  out << "S4        " << format_double(c.s4)
      << "      32*pi^2/3      quadrature vs "
      << format_double(32.0 * pi * pi / 3.0) << "\n";
  out << "c2        " << format_double(c.c2)
      << "      32*pi^2        quadrature vs "
      << format_double(32.0 * pi * pi) << "\n";
  out << "omega3    " << format_double(c.omega3)
      << "       2*pi^2         unit 3-sphere volume\n";
  return out.str();
}

}  // namespace cpicert
