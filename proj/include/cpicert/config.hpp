#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpicert/geometry.hpp"

namespace cpicert {

struct Tolerances {
  double grad_tol = 1e-9;
  double merge_tol = 1e-5;
  double nondegeneracy_tol = 1e-7;
  double beta_tol = 1e-9;
  double rho_tol = 1e-9;
  double flow_tol = 1e-8;
};

struct FlowConfig {
  double horizon = 2000.0;
  double s0 = 0.05;
  double basin_radius = 0.5;
};

struct MuAssertionInput {
  std::vector<std::string> subset;  // critical-point names
  int value = 0;                    // 0 or 1
};

// Resolved run configuration. JSON schema (strict, unknown keys rejected):
//   {"field": str, "manifold": {"type": "round_s4"} |
//    {"type": "table", "path": str}, "seed": int, "starts": int,
//    "max_newton_iters": int, "max_kplus": int, "positivity_samples": int,
//    "tolerances": {...}, "flow": {...},
//    "mu": [{"subset": [names], "value": 0|1}]}
struct RunConfig {
  std::string field_source;
  enum class ManifoldKind { kRoundS4, kTable } manifold = ManifoldKind::kRoundS4;
  std::string table_path;
  std::uint64_t seed = 0;
  int starts = 4096;
  int max_newton_iters = 50;
  int max_kplus = 20;
  int positivity_samples = 4096;
  Tolerances tol;
  FlowConfig flow;
  std::vector<MuAssertionInput> mu;
};

RunConfig load_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& where);

struct TablePoint {
  std::string name;
  std::optional<Vec5> coords;
  double mass = 0.0;
};

// User-supplied manifold data: tabulated points with their masses A and all
// pairwise Green's values. Both directions of every pair must be present and
// agree within 1e-9; only the listed points are usable - there is no
// interpolation.
class ManifoldTable {
 public:
  static ManifoldTable load(const std::string& path);
  static ManifoldTable parse_text(const std::string& text,
                                  const std::string& where);

  ManifoldModel model() const;
  const std::vector<TablePoint>& points() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

}  // namespace cpicert
