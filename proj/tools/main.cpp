// Command-line front end: config ingestion, pipeline orchestration and
// deterministic report/trajectory output.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cpicert/bubble.hpp"
#include "cpicert/pipeline.hpp"
#include "cpicert/report.hpp"
#include "cpicert/shadow_flow.hpp"
#include "cpicert/version.hpp"

namespace {

using namespace cpicert;

struct CliOptions {
  std::string config_path;
  std::string field;
  std::optional<long long> seed;
  std::optional<int> starts;
  std::optional<int> max_newton_iters;
  std::optional<double> grad_tol;
  std::optional<double> merge_tol;
  std::optional<double> nondegeneracy_tol;
  std::optional<double> beta_tol;
  std::optional<double> rho_tol;
  std::string manifold_table;
  std::string out_dir;
  std::string format = "text";
  std::string subset;
  std::optional<double> flow_s0;
  std::optional<double> flow_horizon;
};

RunConfig resolve_config(const CliOptions& cli) {
  RunConfig cfg;
  if (!cli.config_path.empty()) cfg = load_config_file(cli.config_path);
  // flags override file values
  if (!cli.field.empty()) cfg.field_source = cli.field;
  if (cli.seed) cfg.seed = static_cast<std::uint64_t>(*cli.seed);
  if (cli.starts) cfg.starts = *cli.starts;
  if (cli.max_newton_iters) cfg.max_newton_iters = *cli.max_newton_iters;
  if (cli.grad_tol) cfg.tol.grad_tol = *cli.grad_tol;
  if (cli.merge_tol) cfg.tol.merge_tol = *cli.merge_tol;
  if (cli.nondegeneracy_tol) cfg.tol.nondegeneracy_tol = *cli.nondegeneracy_tol;
  if (cli.beta_tol) cfg.tol.beta_tol = *cli.beta_tol;
  if (cli.rho_tol) cfg.tol.rho_tol = *cli.rho_tol;
  if (!cli.manifold_table.empty()) {
    cfg.manifold = RunConfig::ManifoldKind::kTable;
    cfg.table_path = cli.manifold_table;
  }
  if (cli.flow_s0) cfg.flow.s0 = *cli.flow_s0;
  if (cli.flow_horizon) cfg.flow.horizon = *cli.flow_horizon;
  return cfg;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

void emit(const CliOptions& cli, const std::string& base_name,
          const nlohmann::ordered_json& j, const std::string& text) {
  if (cli.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  if (!cli.out_dir.empty()) {
    write_file(cli.out_dir, base_name + ".json", j.dump(2) + "\n");
    write_file(cli.out_dir, base_name + ".txt", text);
  }
}

int cmd_analyze(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const AnalysisResult res = run_analysis(cfg);
  const nlohmann::ordered_json j = report_json(res);
  const std::string text = report_text(res);
  if (cli.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  const std::string dir = cli.out_dir.empty() ? "." : cli.out_dir;
  write_file(dir, "report.json", j.dump(2) + "\n");
  write_file(dir, "report.txt", text);
  return res.exit_code;
}

int cmd_critical_points(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const AnalysisResult res = run_analysis(cfg);
  nlohmann::ordered_json full = report_json(res);
  nlohmann::ordered_json j;
  j["tool"] = full["tool"];
  j["critical_points"] = full["critical_points"];
  j["poincare_hopf"] = full["poincare_hopf"];
  j["h0"] = full["h0"];
  j["kplus"] = full["kplus"];

  std::ostringstream text;
  text << "critical points (" << res.critical.points.size() << "):\n";
  for (std::size_t i = 0; i < res.critical.points.size(); ++i) {
    const CriticalPoint& p = res.critical.points[i];
    text << "  " << res.names[i];
    if (!res.aliases[i].empty()) text << " (" << res.aliases[i] << ")";
    text << ": K=" << format_double(p.k_value) << " morse=" << p.morse_index
         << " beta=" << format_double(p.beta)
         << (p.beta > 0 ? "  [K+]" : "") << "\n";
  }
  emit(cli, "critical_points", j, text.str());
  return res.h0.pass ? 0 : 3;
}

int cmd_matrix(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const AnalysisResult res = run_analysis(cfg);
  const std::vector<int> members = resolve_subset(cli.subset, res);

  std::vector<CriticalPoint> pts;
  for (int m : members) pts.push_back(res.kplus_points[m]);
  const SymMat mat = build_matrix(pts, make_model(cfg));
  const double rho = least_eigenvalue(mat);
  const int iota = iota_index(pts);

  nlohmann::ordered_json j;
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (int m : members) {
    const int i = res.critical.kplus_indices[m];
    names.push_back(res.names[i]);
  }
  j["members"] = names;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < mat.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < mat.size(); ++c) row.push_back(mat(r, c));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  j["rho"] = rho;
  j["iota"] = iota;
  j["in_f1"] = rho > 0.0;

  std::ostringstream text;
  text << "M(tau) for {" << cli.subset << "}:\n";
  for (int r = 0; r < mat.size(); ++r) {
    text << "  [";
    for (int c = 0; c < mat.size(); ++c) {
      if (c) text << ", ";
      text << format_double(mat(r, c));
    }
    text << "]\n";
  }
  text << "rho = " << format_double(rho) << "  iota = " << iota
       << "  in F1: " << (rho > 0.0 ? "yes" : "no") << "\n";
  emit(cli, "matrix", j, text.str());
  return 0;
}

int cmd_certificate(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const AnalysisResult res = run_analysis(cfg);
  nlohmann::ordered_json full = report_json(res);
  nlohmann::ordered_json j;
  j["tool"] = full["tool"];
  if (full.contains("certificate")) j["certificate"] = full["certificate"];
  j["caveats"] = full["caveats"];

  std::ostringstream text;
  if (res.certificate) {
    const Certificate& c = *res.certificate;
    text << "total_sum=" << c.total_sum << " degree=" << c.degree
         << " l#=" << c.l_sharp << " verdict=" << verdict_name(c.verdict)
         << "\n";
  } else {
    text << "certificate unavailable (hypothesis failure)\n";
  }
  emit(cli, "certificate", j, text.str());
  return res.exit_code;
}

int cmd_constants(const CliOptions& cli) {
  const AnalyticConstants c = compute_constants();
  const double c0 = derive_c0();
  emit(cli, "constants", constants_json(c, c0), constants_text(c, c0));
  return 0;
}

int cmd_flow(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const AnalysisResult res = run_analysis(cfg);
  const std::vector<int> members = resolve_subset(cli.subset, res);
  const ScalarField field = ScalarField::parse(cfg.field_source);
  const ManifoldModel model = make_model(cfg);

  FlowState state;
  for (int m : members) {
    state.points.push_back(res.kplus_points[m].location);
    state.inv_scales.push_back(cfg.flow.s0);
    const double k = res.kplus_points[m].k_value;
    state.weights.push_back(1.0 / std::sqrt(k));  // balanced alpha^2 K
  }

  FlowOptions opts;
  opts.tol = cfg.tol.flow_tol;
  opts.basin_radius = cfg.flow.basin_radius;

  const std::size_t p = members.size();
  std::ostringstream csv;
  csv << "t";
  for (std::size_t i = 1; i <= p; ++i) csv << ",s" << i;
  for (std::size_t i = 1; i <= p; ++i)
    for (int k = 1; k <= 5; ++k) csv << ",a" << i << "_" << k;
  for (std::size_t i = 1; i <= p; ++i) csv << ",alpha" << i;
  csv << "\n";
  const auto dump_row = [&](const FlowState& st) {
    csv << format_double(st.t);
    for (double s : st.inv_scales) csv << "," << format_double(s);
    for (const SpherePoint& pt : st.points)
      for (int k = 0; k < 5; ++k) csv << "," << format_double(pt[k]);
    for (double a : st.weights) csv << "," << format_double(a);
    csv << "\n";
  };
  dump_row(state);

  const FlowVerdict verdict = run_to_verdict(
      state, field, model, cfg.flow.horizon, opts,
      [&](const FlowState& st, const SymMat&) { dump_row(st); });

  const char* verdict_str = verdict == FlowVerdict::kConcentrates ? "Concentrates"
                            : verdict == FlowVerdict::kEscapes    ? "Escapes"
                                                                  : "Undecided";
  std::cout << "flow verdict for {" << cli.subset << "}: " << verdict_str
            << "\n"
            << "note: model dynamics (linearization -M at the configuration), "
               "not the variational flow itself\n";
  const std::string dir = cli.out_dir.empty() ? "." : cli.out_dir;
  write_file(dir, "trajectory.csv", csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " - existence certificates for prescribed scalar curvature on "
               "S^4 via interaction-matrix counting"};
  app.require_subcommand(1);

  CliOptions cli;
  const auto add_common = [&](CLI::App* sub, bool wants_field) {
    sub->add_option("--config", cli.config_path, "JSON config file");
    if (wants_field) {
      sub->add_option("--field", cli.field,
                      "expression for K over x1..x5 (overrides config)");
      sub->add_option("--seed", cli.seed, "search seed");
      sub->add_option("--starts", cli.starts, "multi-start count");
      sub->add_option("--max-newton-iters", cli.max_newton_iters,
                      "Newton iteration cap per start");
      sub->add_option("--grad-tol", cli.grad_tol, "gradient tolerance");
      sub->add_option("--merge-tol", cli.merge_tol, "merge tolerance");
      sub->add_option("--nondegeneracy-tol", cli.nondegeneracy_tol,
                      "Hessian nondegeneracy tolerance");
      sub->add_option("--beta-tol", cli.beta_tol, "beta tolerance");
      sub->add_option("--rho-tol", cli.rho_tol, "rho tolerance");
      sub->add_option("--manifold-table", cli.manifold_table,
                      "manifold data table (JSON)");
    }
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--format", cli.format, "stdout format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* analyze = app.add_subcommand("analyze", "run the full pipeline");
  add_common(analyze, true);
  auto* crit = app.add_subcommand("critical-points",
                                  "critical set, (H0) and K+ only");
  add_common(crit, true);
  auto* matrix = app.add_subcommand("matrix",
                                    "interaction matrix of a named subset");
  matrix->add_option("subset", cli.subset,
                     "comma-separated critical point names")->required();
  add_common(matrix, true);
  auto* cert = app.add_subcommand("certificate", "counting certificate only");
  add_common(cert, true);
  auto* consts = app.add_subcommand("constants",
                                    "bubble expansion constants with provenance");
  add_common(consts, false);
  auto* flow = app.add_subcommand("flow",
                                  "shadow-flow trajectory for a named subset");
  flow->add_option("subset", cli.subset,
                   "comma-separated critical point names")->required();
  flow->add_option("--s0", cli.flow_s0, "initial inverse scales");
  flow->add_option("--horizon", cli.flow_horizon, "time horizon");
  add_common(flow, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(cli);
    if (crit->parsed()) return cmd_critical_points(cli);
    if (matrix->parsed()) return cmd_matrix(cli);
    if (cert->parsed()) return cmd_certificate(cli);
    if (consts->parsed()) return cmd_constants(cli);
    if (flow->parsed()) return cmd_flow(cli);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
