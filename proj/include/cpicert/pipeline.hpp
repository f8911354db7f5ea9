#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpicert/certificate.hpp"
#include "cpicert/config.hpp"
#include "cpicert/critical.hpp"
#include "cpicert/field.hpp"
#include "cpicert/interaction.hpp"

namespace cpicert {

// Everything the full pipeline produces. Stages after a hypothesis failure
// stay empty; exit_code carries the CLI contract (0 existence, 2 no
// conclusion, 3 hypothesis failure).
struct AnalysisResult {
  RunConfig config;
  PositivityReport positivity{0.0, SpherePoint::axis(4), 0};
  CriticalSet critical;
  std::vector<std::string> names;    // canonical cp1..cpN
  std::vector<std::string> aliases;  // axis names ("north", "e4+", ...) or ""
  H0Report h0;
  std::vector<CriticalPoint> kplus_points;
  std::optional<F1Set> f1;
  std::optional<H1Report> h1;
  std::optional<Certificate> certificate;
  std::optional<Verdict> general_verdict;  // present when mu was supplied
  std::vector<std::string> caveats;
  int exit_code = 2;
};

SearchConfig search_config(const RunConfig& cfg);
ManifoldModel make_model(const RunConfig& cfg);

// Axis alias for near-axis points: "north"/"south" for +-e5, "e1+".."e4-"
// otherwise, empty when the point is not within 1e-6 of an axis.
std::string axis_alias(const SpherePoint& p);

// Full pipeline: positivity -> critical points -> (H0) -> K+ -> subset
// enumeration -> (H1) -> certificate. Throws the typed errors of the
// individual stages; (H0)/(H1) violations are recorded in the result instead
// (exit_code 3) so a report can still be rendered.
AnalysisResult run_analysis(const RunConfig& cfg);

// Members (positions in the K+ list) named by a comma-separated list of
// canonical names or aliases. Throws UnknownSubset.
std::vector<int> resolve_subset(const std::string& comma_list,
                                const AnalysisResult& result);

// Config-level mu assertions resolved against the K+ listing.
MuAssertions resolve_mu(const RunConfig& cfg, const AnalysisResult& result);

}  // namespace cpicert
