#include "cpicert/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cpicert {

namespace {

std::vector<std::string> standing_caveats(const RunConfig& cfg) {
  std::vector<std::string> c;
  c.push_back(
      "Green's function convention: L G(a,.) = delta_a, leading singularity "
      "1/(4 pi^2 d^2); off-diagonal interaction magnitudes (hence rho values) "
      "depend on this normalization, sign patterns do not.");
  c.push_back(
      "Mass A_a is the constant term of the Green's function expansion in "
      "conformal normal coordinates (0 on the round sphere).");
  c.push_back(
      "Critical-point completeness is heuristic: the Poincare-Hopf sum and "
      "restart escalation cannot detect a missed pair of cancelling critical "
      "points.");
  c.push_back(
      "(H1) is checked over subsets of every size p; the pairs-only margin "
      "is reported separately.");
  c.push_back(
      "Multiplicity lower bounds assume K is generic (nondegenerate "
      "solutions); genericity is assumed, not checked.");
  if (!cfg.mu.empty())
    c.push_back(
        "mu values are user assertions; conditional verdicts depend on them "
        "and are labeled accordingly.");
  return c;
}

std::string axis_name(int axis, bool positive) {
  if (axis == 4) return positive ? "north" : "south";
  return "e" + std::to_string(axis + 1) + (positive ? "+" : "-");
}

}  // namespace

SearchConfig search_config(const RunConfig& cfg) {
  SearchConfig sc;
  sc.starts = cfg.starts;
  sc.seed = cfg.seed;
  sc.grad_tol = cfg.tol.grad_tol;
  sc.merge_tol = cfg.tol.merge_tol;
  sc.nondegeneracy_tol = cfg.tol.nondegeneracy_tol;
  sc.beta_tol = cfg.tol.beta_tol;
  sc.max_newton_iters = cfg.max_newton_iters;
  return sc;
}

ManifoldModel make_model(const RunConfig& cfg) {
  if (cfg.manifold == RunConfig::ManifoldKind::kRoundS4)
    return round_sphere_model();
  return ManifoldTable::load(cfg.table_path).model();
}

std::string axis_alias(const SpherePoint& p) {
  for (int i = 0; i < 5; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec5 axis{};
      axis[i] = sign;
      if (norm(sub(p.coords(), axis)) < 1e-6) return axis_name(i, sign > 0);
    }
  }
  return "";
}

AnalysisResult run_analysis(const RunConfig& cfg) {
  if (cfg.field_source.empty())
    throw ConfigError("no field expression given (set \"field\" or --field)");

  AnalysisResult res;
  res.config = cfg;
  res.caveats = standing_caveats(cfg);

  const ScalarField field = ScalarField::parse(cfg.field_source);
  const ManifoldModel model = make_model(cfg);

  res.positivity = validate_positivity(field, cfg.positivity_samples, cfg.seed);

  const SearchConfig sc = search_config(cfg);
  res.critical = find_critical_points(field, model, sc);
  for (std::size_t i = 0; i < res.critical.points.size(); ++i) {
    res.names.push_back("cp" + std::to_string(i + 1));
    res.aliases.push_back(axis_alias(res.critical.points[i].location));
  }

  res.h0 = verify_H0(res.critical, sc);
  if (!res.h0.pass) {
    res.caveats.push_back("(H0) failed; later stages were not run.");
    res.exit_code = 3;
    return res;
  }

  res.kplus_points = kplus(res.critical);
  res.f1 = enumerate_candidates(res.kplus_points, model, cfg.tol.rho_tol,
                                cfg.max_kplus);
  res.h1 = check_H1(*res.f1);
  if (!res.h1->pass) {
    res.caveats.push_back(
        "(H1) failed: some subset has |rho| below tolerance, so F1 "
        "membership is not decided; later stages were not run.");
    res.exit_code = 3;
    return res;
  }

  Certificate cert = counting_sums(*res.f1);
  evaluate_criteria(cert);
  res.certificate = cert;

  if (!cfg.mu.empty()) {
    Certificate general = cert;
    res.general_verdict =
        evaluate_criteria_with_mu(general, *res.f1, resolve_mu(cfg, res));
  }

  const Verdict& final_verdict =
      res.general_verdict &&
              res.general_verdict->kind != Verdict::Kind::kNoConclusion
          ? *res.general_verdict
          : cert.verdict;
  res.exit_code =
      final_verdict.kind == Verdict::Kind::kNoConclusion ? 2 : 0;
  if (cert.verdict.kind == Verdict::Kind::kNoConclusion &&
      cert.degree == 0) {
    res.caveats.push_back(
        "Degree-zero case: the total alternating sum is 1, so degree-based "
        "criteria are silent (consistent with the Kazdan-Warner obstruction "
        "for affine K on the round sphere).");
  }
  return res;
}

std::vector<int> resolve_subset(const std::string& comma_list,
                                const AnalysisResult& result) {
  std::map<std::string, int> lookup;  // name -> index into K+ list
  for (std::size_t k = 0; k < result.kplus_points.size(); ++k) {
    const int point_index = result.critical.kplus_indices[k];
    lookup[result.names[point_index]] = static_cast<int>(k);
    if (!result.aliases[point_index].empty())
      lookup[result.aliases[point_index]] = static_cast<int>(k);
  }

  std::vector<int> members;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    // trim
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UnknownSubset(item);
    item = item.substr(b, e - b + 1);
    const auto it = lookup.find(item);
    if (it == lookup.end()) throw UnknownSubset(item);
    members.push_back(it->second);
  }
  if (members.empty()) throw UnknownSubset(comma_list);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

MuAssertions resolve_mu(const RunConfig& cfg, const AnalysisResult& result) {
  MuAssertions mu;
  for (const MuAssertionInput& in : cfg.mu) {
    std::string joined;
    for (std::size_t i = 0; i < in.subset.size(); ++i) {
      if (i) joined += ",";
      joined += in.subset[i];
    }
    mu[resolve_subset(joined, result)] = in.value;
  }
  return mu;
}

}  // namespace cpicert
