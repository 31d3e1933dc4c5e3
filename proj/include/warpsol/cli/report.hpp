#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpsol/errors.hpp"

namespace warpsol::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "warpsol";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kMeshWarning =
    "mesh coordinates are ambient-chart coordinates (t, x1, x2), not an isometric embedding; distances are not to scale";

/// Non-finite values become null so the document stays valid JSON.
inline json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json point(const std::vector<double>& p) {
  json a = json::array();
  for (double x : p) a.push_back(json_number(x));
  return a;
}

inline json report_header(const std::string& command) {
  json r;
  r["schema_version"] = 1;
  r["tool"] = kToolName;
  r["tool_version"] = kToolVersion;
  r["command"] = command;
  return r;
}

/// The document without its timing block, for determinism comparisons.
inline json without_timing(json r) {
  r.erase("timing");
  return r;
}

inline std::string serialize(const json& r) { return r.dump(2) + "\n"; }

inline void write_report(const std::string& path, const json& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report file '" + path + "'");
  out << serialize(r);
}

}  // namespace warpsol::cli
