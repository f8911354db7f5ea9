#pragma once

#include <string>

#include <json.hpp>

#include "cpicert/bubble.hpp"
#include "cpicert/pipeline.hpp"

namespace cpicert {

// Deterministic renderings: no timestamps or paths, insertion-ordered keys,
// shortest-roundtrip numbers. Identical config + seed gives identical bytes.
nlohmann::ordered_json report_json(const AnalysisResult& res);
std::string report_text(const AnalysisResult& res);

nlohmann::ordered_json constants_json(const AnalyticConstants& c, double c0);
std::string constants_text(const AnalyticConstants& c, double c0);

std::string verdict_name(const Verdict& v);
std::string format_double(double v);

}  // namespace cpicert
