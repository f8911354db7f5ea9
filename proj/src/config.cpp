#include "cpicert/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cpicert {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(where, e.what());
  }
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected a JSON object");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw SchemaError(where, "unknown key '" + item.key() + "'");
  }
}

double get_number(const json& obj, const std::string& key,
                  const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw SchemaError(where + "." + key, "expected a number");
  return obj[key].get<double>();
}

long long get_integer(const json& obj, const std::string& key,
                      const std::string& where, long long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw SchemaError(where + "." + key, "expected an integer");
  return obj[key].get<long long>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& where) {
  const json j = parse_json(text, where);
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"field", "manifold", "seed", "starts",
                       "max_newton_iters", "max_kplus", "positivity_samples",
                       "tolerances", "flow", "mu"});

  RunConfig cfg;
  if (j.contains("field")) {
    if (!j["field"].is_string())
      throw SchemaError(where + ".field", "expected a string");
    cfg.field_source = j["field"].get<std::string>();
  }

  if (j.contains("manifold")) {
    const json& m = j["manifold"];
    require_object(m, where + ".manifold");
    reject_unknown_keys(m, where + ".manifold", {"type", "path"});
    if (!m.contains("type") || !m["type"].is_string())
      throw SchemaError(where + ".manifold.type", "expected a string");
    const std::string type = m["type"].get<std::string>();
    if (type == "round_s4") {
      cfg.manifold = RunConfig::ManifoldKind::kRoundS4;
      if (m.contains("path"))
        throw SchemaError(where + ".manifold.path",
                          "not allowed for type 'round_s4'");
    } else if (type == "table") {
      cfg.manifold = RunConfig::ManifoldKind::kTable;
      if (!m.contains("path") || !m["path"].is_string())
        throw SchemaError(where + ".manifold.path",
                          "required string for type 'table'");
      cfg.table_path = m["path"].get<std::string>();
    } else {
      throw SchemaError(where + ".manifold.type",
                        "must be 'round_s4' or 'table'");
    }
  }

  cfg.seed = static_cast<std::uint64_t>(
      get_integer(j, "seed", where, static_cast<long long>(cfg.seed)));
  cfg.starts = static_cast<int>(get_integer(j, "starts", where, cfg.starts));
  cfg.max_newton_iters = static_cast<int>(
      get_integer(j, "max_newton_iters", where, cfg.max_newton_iters));
  cfg.max_kplus =
      static_cast<int>(get_integer(j, "max_kplus", where, cfg.max_kplus));
  cfg.positivity_samples = static_cast<int>(
      get_integer(j, "positivity_samples", where, cfg.positivity_samples));

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    require_object(t, where + ".tolerances");
    reject_unknown_keys(t, where + ".tolerances",
                        {"grad_tol", "merge_tol", "nondegeneracy_tol",
                         "beta_tol", "rho_tol", "flow_tol"});
    const std::string tw = where + ".tolerances";
    cfg.tol.grad_tol = get_number(t, "grad_tol", tw, cfg.tol.grad_tol);
    cfg.tol.merge_tol = get_number(t, "merge_tol", tw, cfg.tol.merge_tol);
    cfg.tol.nondegeneracy_tol =
        get_number(t, "nondegeneracy_tol", tw, cfg.tol.nondegeneracy_tol);
    cfg.tol.beta_tol = get_number(t, "beta_tol", tw, cfg.tol.beta_tol);
    cfg.tol.rho_tol = get_number(t, "rho_tol", tw, cfg.tol.rho_tol);
    cfg.tol.flow_tol = get_number(t, "flow_tol", tw, cfg.tol.flow_tol);
  }

  if (j.contains("flow")) {
    const json& fl = j["flow"];
    require_object(fl, where + ".flow");
    reject_unknown_keys(fl, where + ".flow", {"horizon", "s0", "basin_radius"});
    const std::string fw = where + ".flow";
    cfg.flow.horizon = get_number(fl, "horizon", fw, cfg.flow.horizon);
    cfg.flow.s0 = get_number(fl, "s0", fw, cfg.flow.s0);
    cfg.flow.basin_radius =
        get_number(fl, "basin_radius", fw, cfg.flow.basin_radius);
  }

  if (j.contains("mu")) {
    const json& mu = j["mu"];
    if (!mu.is_array()) throw SchemaError(where + ".mu", "expected an array");
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const std::string mw = where + ".mu[" + std::to_string(i) + "]";
      const json& entry = mu[i];
      require_object(entry, mw);
      reject_unknown_keys(entry, mw, {"subset", "value"});
      if (!entry.contains("subset") || !entry["subset"].is_array())
        throw SchemaError(mw + ".subset", "expected an array of names");
      if (!entry.contains("value") || !entry["value"].is_number_integer())
        throw SchemaError(mw + ".value", "expected 0 or 1");
      MuAssertionInput in;
      for (const json& name : entry["subset"]) {
        if (!name.is_string())
          throw SchemaError(mw + ".subset", "expected an array of names");
        in.subset.push_back(name.get<std::string>());
      }
      in.value = entry["value"].get<int>();
      if (in.value != 0 && in.value != 1)
        throw SchemaError(mw + ".value", "mu values are mod-2: 0 or 1");
      if (in.subset.empty())
        throw SchemaError(mw + ".subset", "subset must be nonempty");
      cfg.mu.push_back(std::move(in));
    }
  }

  if (cfg.starts < 1) throw SchemaError(where + ".starts", "must be >= 1");
  if (cfg.positivity_samples < 1)
    throw SchemaError(where + ".positivity_samples", "must be >= 1");
  if (cfg.max_newton_iters < 1)
    throw SchemaError(where + ".max_newton_iters", "must be >= 1");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config_text(slurp(path), path);
}

// ---------------------------------------------------------------------------

struct ManifoldTable::Data {
  std::vector<TablePoint> points;
  std::map<std::pair<int, int>, double> green;
  double scalar_coeff = 2.0;

  int resolve(const SpherePoint& p, const char* what) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!points[i].coords) continue;
      if (norm(sub(p.coords(), *points[i].coords)) < 1e-6)
        return static_cast<int>(i);
    }
    throw SchemaError(std::string("manifold table"),
                      std::string(what) +
                          " queried at a point that is not tabulated; only "
                          "listed points are usable (no interpolation)");
  }
};

ManifoldTable ManifoldTable::parse_text(const std::string& text,
                                        const std::string& where) {
  const json j = parse_json(text, where);
  require_object(j, where);
  reject_unknown_keys(j, where, {"points", "green", "scalar_coeff"});
  if (!j.contains("points") || !j["points"].is_array())
    throw SchemaError(where + ".points", "expected an array");
  if (!j.contains("green") || !j["green"].is_array())
    throw SchemaError(where + ".green", "expected an array");

  auto data = std::make_shared<Data>();
  data->scalar_coeff = get_number(j, "scalar_coeff", where, 2.0);
  if (!(data->scalar_coeff > 0.0))
    throw SchemaError(where + ".scalar_coeff", "must be positive");

  std::map<std::string, int> index;
  for (std::size_t i = 0; i < j["points"].size(); ++i) {
    const std::string pw = where + ".points[" + std::to_string(i) + "]";
    const json& entry = j["points"][i];
    require_object(entry, pw);
    reject_unknown_keys(entry, pw, {"name", "coords", "A"});
    if (!entry.contains("name") || !entry["name"].is_string())
      throw SchemaError(pw + ".name", "expected a string");
    if (!entry.contains("A") || !entry["A"].is_number())
      throw SchemaError(pw + ".A", "expected a number");
    TablePoint tp;
    tp.name = entry["name"].get<std::string>();
    tp.mass = entry["A"].get<double>();
    if (tp.name.empty()) throw SchemaError(pw + ".name", "must be nonempty");
    if (index.count(tp.name))
      throw SchemaError(pw + ".name", "duplicate point name '" + tp.name + "'");
    if (entry.contains("coords")) {
      const json& c = entry["coords"];
      if (!c.is_array() || c.size() != 5)
        throw SchemaError(pw + ".coords", "expected 5 numbers");
      Vec5 v;
      for (int k = 0; k < 5; ++k) {
        if (!c[k].is_number())
          throw SchemaError(pw + ".coords", "expected 5 numbers");
        v[k] = c[k].get<double>();
      }
      if (std::abs(norm(v) - 1.0) > 1e-6)
        throw SchemaError(pw + ".coords", "coordinates must be a unit 5-vector");
      tp.coords = SpherePoint(v).coords();
    }
    index[tp.name] = static_cast<int>(data->points.size());
    data->points.push_back(std::move(tp));
  }

  for (std::size_t e = 0; e < j["green"].size(); ++e) {
    const std::string gw = where + ".green[" + std::to_string(e) + "]";
    const json& entry = j["green"][e];
    require_object(entry, gw);
    reject_unknown_keys(entry, gw, {"i", "j", "value"});
    if (!entry.contains("i") || !entry["i"].is_string() ||
        !entry.contains("j") || !entry["j"].is_string())
      throw SchemaError(gw, "'i' and 'j' must be point names");
    if (!entry.contains("value") || !entry["value"].is_number())
      throw SchemaError(gw + ".value", "expected a number");
    const std::string iname = entry["i"].get<std::string>();
    const std::string jname = entry["j"].get<std::string>();
    if (!index.count(iname))
      throw SchemaError(gw + ".i", "unknown point '" + iname + "'");
    if (!index.count(jname))
      throw SchemaError(gw + ".j", "unknown point '" + jname + "'");
    const int a = index[iname], b = index[jname];
    if (a == b) throw SchemaError(gw, "diagonal Green entries are not allowed");
    const double v = entry["value"].get<double>();
    if (!(v > 0.0)) throw SchemaError(gw + ".value", "G must be positive");
    if (data->green.count({a, b}))
      throw SchemaError(gw, "duplicate entry (" + iname + ", " + jname + ")");
    data->green[{a, b}] = v;
  }

  // symmetry: both directions present and consistent
  const int n = static_cast<int>(data->points.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto it = data->green.find({a, b});
      if (it == data->green.end())
        throw SchemaError(where + ".green",
                          "missing entry (" + data->points[a].name + ", " +
                              data->points[b].name + ")");
      const auto rev = data->green.find({b, a});
      if (rev == data->green.end())
        throw SchemaError(where + ".green",
                          "missing symmetric entry (" + data->points[b].name +
                              ", " + data->points[a].name + ")");
      if (std::abs(it->second - rev->second) > 1e-9)
        throw SchemaError(where + ".green",
                          "asymmetric values for (" + data->points[a].name +
                              ", " + data->points[b].name + ")");
    }
  }

  ManifoldTable out;
  out.data_ = std::move(data);
  return out;
}

ManifoldTable ManifoldTable::load(const std::string& path) {
  return parse_text(slurp(path), path);
}

const std::vector<TablePoint>& ManifoldTable::points() const {
  return data_->points;
}

ManifoldModel ManifoldTable::model() const {
  auto data = data_;
  ManifoldModel m;
  m.scalar_coeff = data->scalar_coeff;
  m.green = [data](const SpherePoint& a, const SpherePoint& x) {
    const int i = data->resolve(a, "green");
    const int j = data->resolve(x, "green");
    if (i == j) throw PoleCoincidence(0.0);
    return data->green.at({i, j});
  };
  m.mass = [data](const SpherePoint& a) {
    return data->points[data->resolve(a, "mass")].mass;
  };
  m.distance = &geodesic_distance;
  return m;
}

}  // namespace cpicert
