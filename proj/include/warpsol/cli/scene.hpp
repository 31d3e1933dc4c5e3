#pragma once

#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpsol/ambient.hpp"
#include "warpsol/catalogue.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/grid.hpp"
#include "warpsol/hypersurface.hpp"

// Scene file (JSON):
//
// {
//   "schema_version": 1,
//   "ambient":   {"interval": [lo, hi], "f": "exp(t)", "fiber": "euclidean" | "sphere", "n": 2},
//   "immersion": {"preset": "sphere", "params": {"n": 2}}
//             or {"components": ["u", "0", "v1"],
//                 "chart": {"variables": ["u", "v1"], "box": [[-1, 1], [-1, 1]]}},
//   "grid":      {"samples": 5 | [5, 5], "margins": 0.05 | [0.05, 0.05]},
//   "checks":    ["lemma1", "soliton", "structural", "theorem1", "spaceform c=-1", ...],
//   "output":    {"report": "out.json", "mesh": "out.obj"}
// }
//
// Interval ends may be the strings "inf" / "-inf". Presets carry their own
// ambient, so "ambient" is only accepted with "components".

namespace warpsol::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct CheckRequest {
  enum class Kind { Lemma1, Soliton, Structural, Theorem, SpaceForm, RotationalClassification };
  Kind kind = Kind::Soliton;
  std::string name;  // as written in the scene
  Theorem theorem = Theorem::Theorem1;
  double c = 0.0;
};

struct Scene {
  json source;  // the file as parsed, echoed into reports
  std::optional<std::string> preset;
  PresetParams preset_params;
  std::optional<Immersion> immersion;
  std::vector<std::size_t> samples;
  std::vector<double> margins;
  std::vector<CheckRequest> checks;
  std::optional<std::string> report_path;
  std::optional<std::string> mesh_path;

  std::vector<ChartPoint> grid() const { return make_grid(immersion->chart(), samples, margins); }
};

namespace detail {

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw SceneError(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw SceneError(where.empty() ? k : where + "." + k, "unknown field");
  }
}

inline const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw SceneError(where.empty() ? key : where + "." + key, "missing required field");
  return obj.at(key);
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw SceneError(field, "expected a number");
  return v.get<double>();
}

inline std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) throw SceneError(field, "expected a string");
  return v.get<std::string>();
}

inline double bound(const json& v, const std::string& field) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw SceneError(field, "expected a number, \"inf\" or \"-inf\"");
  }
  return number(v, field);
}

inline int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw SceneError(field, "expected an integer");
  return v.get<int>();
}

inline WarpedProduct parse_ambient(const json& a) {
  only_keys(a, "ambient", {"interval", "f", "fiber", "n"});
  const json& iv = required(a, "ambient", "interval");
  if (!iv.is_array() || iv.size() != 2) throw SceneError("ambient.interval", "expected [lo, hi]");
  const Interval interval{bound(iv[0], "ambient.interval[0]"), bound(iv[1], "ambient.interval[1]")};
  const std::string f = text(required(a, "ambient", "f"), "ambient.f");
  const std::string fiber = text(required(a, "ambient", "fiber"), "ambient.fiber");
  FiberModel model;
  if (fiber == "euclidean")
    model = FiberModel::FlatEuclidean;
  else if (fiber == "sphere")
    model = FiberModel::RoundSphere;
  else
    throw SceneError("ambient.fiber", "expected \"euclidean\" or \"sphere\"");
  const int n = integer(required(a, "ambient", "n"), "ambient.n");
  if (n < 1) throw SceneError("ambient.n", "fiber dimension must be at least 1");
  Expression fe;
  try {
    fe = Expression::parse(f, {"t"});
  } catch (const Error& e) {
    throw SceneError("ambient.f", e.what());
  }
  try {
    return WarpedProduct(interval, std::move(fe), model, n);
  } catch (const ConstructionError& e) {
    throw SceneError("ambient", e.what());
  }
}

inline Immersion parse_components(const json& im, const WarpedProduct& ambient) {
  const json& chart = required(im, "immersion", "chart");
  only_keys(chart, "immersion.chart", {"variables", "box"});
  const json& vars = required(chart, "immersion.chart", "variables");
  if (!vars.is_array()) throw SceneError("immersion.chart.variables", "expected a list of names");
  ChartBox box;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto name = text(vars[i], "immersion.chart.variables[" + std::to_string(i) + "]");
    if (!seen.insert(name).second) throw SceneError("immersion.chart.variables", "duplicate variable '" + name + "'");
    box.names.push_back(name);
  }
  if (box.dim() != static_cast<std::size_t>(ambient.n()))
    throw SceneError("immersion.chart.variables", "need exactly n = " + std::to_string(ambient.n()) + " chart variables");
  const json& b = required(chart, "immersion.chart", "box");
  if (!b.is_array() || b.size() != box.dim()) throw SceneError("immersion.chart.box", "expected one [lo, hi] per variable");
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const std::string field = "immersion.chart.box[" + std::to_string(i) + "]";
    if (!b[i].is_array() || b[i].size() != 2) throw SceneError(field, "expected [lo, hi]");
    box.lo.push_back(number(b[i][0], field));
    box.hi.push_back(number(b[i][1], field));
    if (!(box.lo.back() < box.hi.back())) throw SceneError(field, "requires lo < hi");
  }
  const json& comps = required(im, "immersion", "components");
  if (!comps.is_array() || comps.size() != ambient.dim())
    throw SceneError("immersion.components", "expected n + 1 = " + std::to_string(ambient.dim()) + " expressions");
  std::vector<Expression> exprs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string field = "immersion.components[" + std::to_string(i) + "]";
    try {
      exprs.push_back(Expression::parse(text(comps[i], field), box.names));
    } catch (const SceneError&) {
      throw;
    } catch (const Error& e) {
      throw SceneError(field, e.what());
    }
  }
  return Immersion(ambient, std::move(box), std::move(exprs));
}

inline PresetParams parse_params(const json& p) {
  if (!p.is_object()) throw SceneError("immersion.params", "expected an object");
  PresetParams out;
  for (const auto& [k, v] : p.items()) {
    if (k == "f")
      out.f = text(v, "immersion.params.f");
    else
      out.values[k] = number(v, "immersion.params." + k);
  }
  return out;
}

inline CheckRequest parse_check(const json& v, std::size_t i) {
  const std::string field = "checks[" + std::to_string(i) + "]";
  const std::string name = text(v, field);
  CheckRequest c;
  c.name = name;
  using K = CheckRequest::Kind;
  if (name == "lemma1") {
    c.kind = K::Lemma1;
  } else if (name == "soliton") {
    c.kind = K::Soliton;
  } else if (name == "structural") {
    c.kind = K::Structural;
  } else if (name == "rotational-classification") {
    c.kind = K::RotationalClassification;
  } else if (name.rfind("theorem", 0) == 0) {
    c.kind = K::Theorem;
    const std::string which = name.substr(7);
    if (which == "1") c.theorem = Theorem::Theorem1;
    else if (which == "3") c.theorem = Theorem::Theorem3;
    else if (which == "4a") c.theorem = Theorem::Theorem4a;
    else if (which == "4b") c.theorem = Theorem::Theorem4b;
    else if (which == "5") c.theorem = Theorem::Theorem5;
    else throw SceneError(field, "unknown theorem '" + name + "'");
  } else if (name.rfind("spaceform", 0) == 0) {
    c.kind = K::SpaceForm;
    const auto eq = name.find("c=");
    if (eq == std::string::npos) throw SceneError(field, "expected \"spaceform c=<number>\"");
    const std::string num = name.substr(eq + 2);
    std::size_t used = 0;
    try {
      c.c = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size()) throw SceneError(field, "cannot read the constant in '" + name + "'");
  } else {
    throw SceneError(field, "unknown check '" + name + "'");
  }
  return c;
}

template <class T>
std::vector<T> per_axis(const json& v, const std::string& field, std::size_t dim, auto&& convert) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.size() != dim) throw SceneError(field, "expected one entry per chart variable");
    for (std::size_t i = 0; i < dim; ++i) out.push_back(convert(v[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.assign(dim, convert(v, field));
  }
  return out;
}

}  // namespace detail

/// Validates and builds everything a scene describes. Errors name the offending field.
inline Scene parse_scene(const json& doc) {
  using namespace detail;
  only_keys(doc, "", {"schema_version", "ambient", "immersion", "grid", "checks", "output"});
  Scene s;
  s.source = doc;
  if (doc.contains("schema_version") && integer(doc.at("schema_version"), "schema_version") != kSchemaVersion)
    throw SceneError("schema_version", "only schema version 1 is supported");

  const json& im = required(doc, "", "immersion");
  only_keys(im, "immersion", {"preset", "params", "components", "chart"});
  if (im.contains("preset")) {
    if (im.contains("components") || im.contains("chart"))
      throw SceneError("immersion", "give either a preset or components with a chart, not both");
    if (doc.contains("ambient")) throw SceneError("ambient", "presets define their own ambient; remove this field");
    s.preset = text(im.at("preset"), "immersion.preset");
    if (im.contains("params")) s.preset_params = parse_params(im.at("params"));
    try {
      s.immersion.emplace(make_preset(*s.preset, s.preset_params));
    } catch (const SceneError&) {
      throw;
    } catch (const SyntaxError& e) {
      throw SceneError("immersion.params.f", e.what());
    } catch (const UnknownIdentifier& e) {
      throw SceneError("immersion.params.f", e.what());
    } catch (const ConstructionError& e) {
      throw SceneError("immersion.params", e.what());
    }
  } else {
    if (im.contains("params")) throw SceneError("immersion.params", "only valid together with a preset");
    const WarpedProduct ambient = parse_ambient(required(doc, "", "ambient"));
    try {
      s.immersion.emplace(parse_components(im, ambient));
    } catch (const ConstructionError& e) {
      throw SceneError("immersion", e.what());
    }
  }

  const std::size_t dim = s.immersion->chart().dim();
  const json& grid = required(doc, "", "grid");
  only_keys(grid, "grid", {"samples", "margins"});
  s.samples = per_axis<std::size_t>(required(grid, "grid", "samples"), "grid.samples", dim,
                                    [](const json& v, const std::string& f) {
                                      const int k = integer(v, f);
                                      if (k < 3) throw SceneError(f, "need at least 3 samples per axis");
                                      return static_cast<std::size_t>(k);
                                    });
  if (grid.contains("margins")) {
    s.margins = per_axis<double>(grid.at("margins"), "grid.margins", dim, [](const json& v, const std::string& f) {
      const double m = number(v, f);
      if (!(m > 0.0)) throw SceneError(f, "margins must be positive");
      return m;
    });
  } else {
    s.margins.assign(dim, 0.05);
  }
  for (std::size_t i = 0; i < dim; ++i)
    if (!(2.0 * s.margins[i] < s.immersion->chart().hi[i] - s.immersion->chart().lo[i]))
      throw SceneError("grid.margins[" + std::to_string(i) + "]", "margin leaves no room inside the chart box");

  const json& checks = required(doc, "", "checks");
  if (!checks.is_array() || checks.empty()) throw SceneError("checks", "expected a non-empty list of check names");
  std::set<std::string> names;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CheckRequest c = parse_check(checks[i], i);
    if (!names.insert(c.name).second) throw SceneError("checks[" + std::to_string(i) + "]", "duplicate check '" + c.name + "'");
    if (c.kind == CheckRequest::Kind::RotationalClassification && s.immersion->tag() != CatalogueTag::Rotational)
      throw SceneError("checks[" + std::to_string(i) + "]", "rotational-classification needs a rotational preset");
    s.checks.push_back(std::move(c));
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    only_keys(out, "output", {"report", "mesh"});
    if (out.contains("report")) s.report_path = text(out.at("report"), "output.report");
    if (out.contains("mesh")) s.mesh_path = text(out.at("mesh"), "output.mesh");
  }
  return s;
}

inline Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("<file>", "cannot open scene file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw SceneError("<file>", std::string("not valid JSON: ") + e.what());
  }
  return parse_scene(doc);
}

}  // namespace warpsol::cli
