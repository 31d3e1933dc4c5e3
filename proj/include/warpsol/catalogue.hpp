#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpsol/ambient.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/hypersurface.hpp"
#include "warpsol/rotational.hpp"

namespace warpsol {

struct PresetParameter {
  std::string name;
  std::string default_value;
  std::string meaning;
};

struct PresetInfo {
  std::string name;
  std::string description;
  std::vector<PresetParameter> parameters;
};

/// Overrides for a preset; numbers by name, plus the warping function where it applies.
struct PresetParams {
  std::map<std::string, double> values;
  std::optional<std::string> f;
};

inline const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"hyperplane", "vertical hyperplane x1 = 0 in R x_1 R^n", {{"n", "2", "fiber dimension"}}},
      {"sphere", "unit sphere centred at the origin of R x_1 R^n", {{"n", "2", "fiber dimension"}}},
      {"horosphere", "slice t = t0 of R x_{e^t} R^n",
       {{"n", "2", "fiber dimension"}, {"t0", "0.3", "height of the slice"}}},
      {"slice", "slice t = t0 of (0, pi) x_{sin t} S^n",
       {{"n", "2", "fiber dimension"}, {"t0", "1", "height of the slice"}}},
      {"example5", "rotational constant-angle surface in R x_{e^t} R^2 with theta = sqrt(2)/2",
       {{"n", "2", "fiber dimension"},
        {"theta", "0.70710678118654757", "constant angle"},
        {"c1", "0", "height offset"},
        {"c2", "0", "profile offset"},
        {"u0", "0", "start of the profile"},
        {"u1", "4", "end of the profile"}}},
      {"rotational", "rotational constant-angle hypersurface in R x_f R^n",
       {{"f", "exp(t)", "warping function"},
        {"n", "2", "fiber dimension"},
        {"theta", "0.70710678118654757", "constant angle"},
        {"c1", "0", "height offset"},
        {"c2", "0", "profile offset"},
        {"u0", "0", "start of the profile"},
        {"u1", "4", "end of the profile"}}},
  };
  return list;
}

inline const PresetInfo& preset_info(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw SceneError("immersion.preset", "unknown preset '" + std::string(name) + "'");
}

namespace detail {

inline double param(const PresetInfo& info, const PresetParams& params, const std::string& key) {
  if (auto it = params.values.find(key); it != params.values.end()) return it->second;
  for (const auto& p : info.parameters)
    if (p.name == key) return std::stod(p.default_value);
  throw SceneError("immersion.params." + key, "parameter is not defined for this preset");
}

inline int dimension_param(const PresetInfo& info, const PresetParams& params) {
  const double n = param(info, params, "n");
  if (!(n >= 1.0) || n != std::floor(n) || n > 16.0)
    throw SceneError("immersion.params.n", "fiber dimension must be an integer between 1 and 16");
  return static_cast<int>(n);
}

inline void check_params(const PresetInfo& info, const PresetParams& params) {
  auto known = [&](const std::string& k) {
    for (const auto& p : info.parameters)
      if (p.name == k) return true;
    return false;
  };
  for (const auto& [k, v] : params.values)
    if (k == "f" || !known(k)) throw SceneError("immersion.params." + k, "unknown parameter for preset " + info.name);
  if (params.f && !known("f")) throw SceneError("immersion.params.f", "unknown parameter for preset " + info.name);
}

/// Chart names u, v1, ..., v_{n-1}.
inline std::vector<std::string> chart_names(int n) {
  std::vector<std::string> names{"u"};
  for (int i = 1; i < n; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

inline Immersion from_text(WarpedProduct ambient, ChartBox box, const std::vector<std::string>& comps, CatalogueTag tag) {
  std::vector<Expression> exprs;
  for (const auto& c : comps) exprs.push_back(Expression::parse(c, box.names));
  return Immersion(std::move(ambient), std::move(box), std::move(exprs), tag);
}

/// sin(a1)...sin(a_{k}) as text.
inline std::string sine_product(const std::vector<std::string>& angles, std::size_t count) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) s += (s.empty() ? "" : "*") + ("sin(" + angles[i] + ")");
  return s.empty() ? "1" : s;
}

/// Components of the hyperspherical chart over the named angles.
inline std::vector<std::string> sphere_chart_text(const std::vector<std::string>& angles, const std::string& scale) {
  std::vector<std::string> out;
  const std::size_t m = angles.size();
  for (std::size_t i = 0; i < m; ++i)
    out.push_back(scale + "*" + sine_product(angles, i) + "*cos(" + angles[i] + ")");
  out.push_back(scale + "*" + sine_product(angles, m));
  return out;
}

}  // namespace detail

inline RotationalProfile rotational_profile(std::string_view name, const PresetParams& params = {}) {
  const PresetInfo& info = preset_info(name);
  if (info.name != "example5" && info.name != "rotational")
    throw SceneError("immersion.preset", "preset '" + info.name + "' is not rotational");
  detail::check_params(info, params);
  RotationalProfile prof;
  prof.n = detail::dimension_param(info, params);
  prof.theta = detail::param(info, params, "theta");
  prof.c1 = detail::param(info, params, "c1");
  prof.c2 = detail::param(info, params, "c2");
  prof.u0 = detail::param(info, params, "u0");
  prof.u1 = detail::param(info, params, "u1");
  prof.f = Expression::parse(params.f.value_or("exp(t)"), {"t"});
  return prof;
}

inline Immersion make_preset(std::string_view name, const PresetParams& params = {}) {
  const PresetInfo& info = preset_info(name);
  detail::check_params(info, params);
  if (info.name == "example5" || info.name == "rotational") return build_rotational(rotational_profile(name, params));

  const int n = detail::dimension_param(info, params);
  const auto names = detail::chart_names(n);
  constexpr Interval line{};

  if (info.name == "hyperplane") {
    ChartBox box{names, std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)};
    std::vector<std::string> comps{"u", "0"};
    for (int i = 1; i < n; ++i) comps.push_back(names[static_cast<std::size_t>(i)]);
    return detail::from_text(WarpedProduct::make(line, "1", FiberModel::FlatEuclidean, n), box, comps,
                             CatalogueTag::Hyperplane);
  }
  if (info.name == "sphere") {
    ChartBox box{names, {}, {}};
    box.lo.push_back(0.3);
    box.hi.push_back(std::numbers::pi - 0.3);
    for (int i = 1; i < n; ++i) {
      const bool last = i == n - 1;
      // last angle centred on 0 so the tie-break picks the outward normal
      box.lo.push_back(last ? 0.3 - std::numbers::pi : 0.3);
      box.hi.push_back(std::numbers::pi - 0.3);
    }
    std::vector<std::string> comps{"cos(u)"};
    const std::vector<std::string> angles(names.begin() + 1, names.end());
    for (auto& c : detail::sphere_chart_text(angles, "sin(u)")) comps.push_back(c);
    return detail::from_text(WarpedProduct::make(line, "1", FiberModel::FlatEuclidean, n), box, comps,
                             CatalogueTag::SphereInEuclidean);
  }
  if (info.name == "horosphere") {
    const double t0 = detail::param(info, params, "t0");
    ChartBox box{names, std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)};
    std::vector<std::string> comps{detail::format_number(t0)};
    for (const auto& v : names) comps.push_back(v);
    return detail::from_text(WarpedProduct::make(line, "exp(t)", FiberModel::FlatEuclidean, n), box, comps,
                             CatalogueTag::Horosphere);
  }
  // slice
  const double t0 = detail::param(info, params, "t0");
  if (!(t0 > 0.0 && t0 < std::numbers::pi)) throw SceneError("immersion.params.t0", "slice height must lie in (0, pi)");
  ChartBox box{names, {}, {}};
  for (int i = 0; i < n; ++i) {
    const bool last = i == n - 1;
    box.lo.push_back(0.3);
    box.hi.push_back(last ? 2.0 * std::numbers::pi - 0.3 : std::numbers::pi - 0.3);
  }
  std::vector<std::string> comps{detail::format_number(t0)};
  for (const auto& v : names) comps.push_back(v);
  return detail::from_text(WarpedProduct::make({0.0, std::numbers::pi}, "sin(t)", FiberModel::RoundSphere, n), box,
                           comps, CatalogueTag::Slice);
}

/// Every preset at its defaults for fiber dimension n.
inline std::vector<std::pair<std::string, Immersion>> catalogue(int n = 2) {
  std::vector<std::pair<std::string, Immersion>> out;
  PresetParams params;
  params.values["n"] = n;
  for (const auto& p : presets()) {
    if (p.name == "rotational") continue;  // same surface as example5 at the defaults
    if (p.name == "example5" && n < 2) continue;
    out.emplace_back(p.name, make_preset(p.name, params));
  }
  return out;
}

}  // namespace warpsol
