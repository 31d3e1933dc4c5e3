#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "warpsol/ambient.hpp"
#include "warpsol/catalogue.hpp"
#include "warpsol/cli/mesh.hpp"
#include "warpsol/cli/report.hpp"
#include "warpsol/cli/scene.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/grid.hpp"
#include "warpsol/rotational.hpp"
#include "warpsol/soliton.hpp"

namespace warpsol::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

inline constexpr std::size_t kSpaceFormSamples = 200;
inline constexpr double kStructuralStep = 1e-3;

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string point_text(const std::vector<double>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + warpsol::detail::format_number(p[i]);
  return s + ")";
}

inline std::string status_text(bool applicable, bool passed) {
  return !applicable ? "not_applicable" : passed ? "pass" : "fail";
}

inline json check_entry(const std::string& name, const std::string& status, double sup_error,
                        const std::vector<double>& worst_point, double worst_value, double tolerance) {
  json c;
  c["name"] = name;
  c["status"] = status;
  c["sup_error"] = json_number(sup_error);
  c["tolerance"] = json_number(tolerance);
  json w;
  w["point"] = point(worst_point);
  w["value"] = json_number(worst_value);
  c["worst"] = w;
  return c;
}

/// Runs the full pointwise pipeline once so that numeric failures carry a chart location.
inline void probe_grid(const Immersion& imm, const std::vector<ChartPoint>& grid) {
  for (const auto& p : grid) {
    try {
      (void)warpsol::detail::soliton_sample(imm, p);
    } catch (const LocatedError&) {
      throw;
    } catch (const Error& e) {
      throw LocatedError(e.what(), p);
    }
  }
}

inline json soliton_block(const SolitonReport& r) {
  json s;
  s["verdict"] = std::string(to_string(r.verdict));
  s["classification"] = std::string(to_string(r.classification));
  s["residual_sup"] = json_number(r.residual_sup);
  s["lambda_min"] = json_number(r.lambda_min);
  s["lambda_max"] = json_number(r.lambda_max);
  s["lambda_advisory"] = r.lambda_advisory;
  s["worst_point"] = point(r.worst_point);
  return s;
}

inline void print_check(std::ostream& out, const json& c) {
  char buf[256];
  const std::string sup = c["sup_error"].is_null() ? std::string("-") : fmt(c["sup_error"].get<double>());
  std::snprintf(buf, sizeof buf, "  %-28s %-15s sup_error %s\n", c["name"].get<std::string>().c_str(),
                c["status"].get<std::string>().c_str(), sup.c_str());
  out << buf;
}

inline double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Maps library errors to exit codes and prints them.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const LocatedError& e) {
    err << "error: " << e.what() << " at chart point " << detail::point_text(e.chart_point()) << '\n';
    return kNumeric;
  } catch (const SceneError& e) {
    err << "scene error: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnknownIdentifier& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const MeshUnsupported& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const SingularMetric& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DegenerateImmersion& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const QuadratureFailure& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const SigmaZero& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const BoundaryTooClose& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const GridTooCoarse& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

/// One row of the space-form table.
struct SpaceFormRow {
  std::string name;
  Interval interval;
  std::string f;
  FiberModel fiber;
  double c;
};

inline std::vector<SpaceFormRow> default_space_form_rows() {
  std::vector<SpaceFormRow> rows;
  for (const auto& m : space_form_models()) rows.push_back({m.name, m.interval, m.f, m.fiber, m.c});
  return rows;
}

inline int cmd_spaceforms(std::ostream& out, std::ostream& err, const std::vector<SpaceFormRow>& extra = {}) {
  return guarded(err, [&] {
    auto rows = default_space_form_rows();
    rows.insert(rows.end(), extra.begin(), extra.end());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-28s %-10s %-10s %6s %14s %14s  %s\n", "model", "f", "fiber", "c", "fiber_resid",
                  "radial_resid", "status");
    out << buf;
    int failures = 0;
    for (const auto& r : rows) {
      const WarpedProduct w = WarpedProduct::make(r.interval, r.f, r.fiber, 1);
      const SpaceFormReport rep = check_space_form(w, r.c, interior_samples(r.interval, kSpaceFormSamples));
      if (!rep.passed) ++failures;
      std::snprintf(buf, sizeof buf, "%-28s %-10s %-10s %6.2f %14.3e %14.3e  %s\n", r.name.c_str(), r.f.c_str(),
                    std::string(to_string(r.fiber)).c_str(), r.c, rep.max_fiber_residual, rep.max_radial_residual,
                    rep.passed ? "pass" : "FAIL");
      out << buf;
    }
    out << (rows.size() - static_cast<std::size_t>(failures)) << "/" << rows.size() << " models pass\n";
    return failures == 0 ? kPass : kCheckFailed;
  });
}

/// Runs every check of a parsed scene; fills `report` and returns the exit code.
inline int run_scene(const Scene& scene, json& report, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Immersion& imm = *scene.immersion;
  const auto grid = scene.grid();

  for (const auto& c : scene.checks)
    if (c.kind == CheckRequest::Kind::Structural)
      for (std::size_t i = 0; i < scene.margins.size(); ++i)
        if (scene.margins[i] < 2.0 * kStructuralStep)
          throw SceneError("grid.margins[" + std::to_string(i) + "]",
                           "the structural check needs margins of at least 0.002 for its difference stencil");

  detail::probe_grid(imm, grid);

  report = report_header("analyze");
  report["scene"] = scene.source;
  json g;
  g["samples"] = scene.samples;
  g["margins"] = scene.margins;
  g["points"] = grid.size();
  report["grid"] = g;

  const SolitonReport sol = soliton_residual(imm, grid);
  json checks = json::array();
  bool all_pass = true;
  for (const auto& req : scene.checks) {
    json entry;
    using K = CheckRequest::Kind;
    switch (req.kind) {
      case K::Lemma1: {
        double sup = 0.0;
        ChartPoint worst;
        for (const auto& p : grid) {
          const HessianPaths hp = hessian_height(imm, p);
          const double e = max_abs(hp.lemma - hp.direct);
          if (e >= sup) {
            sup = e;
            worst = p;
          }
        }
        entry = detail::check_entry(req.name, detail::status_text(true, sup < kSolitonTolerance), sup, worst, sup,
                                    kSolitonTolerance);
        break;
      }
      case K::Soliton: {
        entry = detail::check_entry(req.name, detail::status_text(true, sol.verdict == Verdict::Soliton),
                                    sol.residual_sup, sol.worst_point, sol.residual_sup, kSolitonTolerance);
        entry["classification"] = std::string(to_string(sol.classification));
        break;
      }
      case K::Structural: {
        const StructuralReport st = structural_identity(imm, grid, kStructuralStep);
        entry = detail::check_entry(req.name, detail::status_text(st.applicable, st.sup_error < kFiniteDifferenceTolerance),
                                    st.applicable ? st.sup_error : std::nan(""), st.worst_point, st.sup_error,
                                    kFiniteDifferenceTolerance);
        if (!st.applicable) entry["reason"] = "immersion is not a soliton on this grid";
        break;
      }
      case K::Theorem: {
        const HypothesisReport h = check_hypotheses(imm, grid, req.theorem);
        double sup = 0.0, worst_value = 0.0;
        ChartPoint worst;
        json conds = json::array();
        for (const auto& c : h.conditions) {
          const double violation = c.identity ? c.worst : std::max(0.0, -c.worst);
          if (violation >= sup) {
            sup = violation;
            worst = c.worst_point;
            worst_value = c.worst;
          }
          json cj;
          cj["name"] = c.name;
          cj["kind"] = c.identity ? "identity" : "inequality";
          cj["orientation"] = std::string(to_string(c.orientation));
          cj["passed"] = c.passed;
          cj["worst"] = json_number(c.worst);
          cj["worst_point"] = point(c.worst_point);
          conds.push_back(cj);
        }
        entry = detail::check_entry(req.name, detail::status_text(h.applicable, h.passed), h.applicable ? sup : std::nan(""),
                                    worst, worst_value, kHypothesisTolerance);
        if (!h.applicable) entry["reason"] = h.reason;
        entry["passed_as_given"] = h.passed_as_given;
        entry["passed_flipped"] = h.passed_flipped;
        entry["conditions"] = conds;
        break;
      }
      case K::SpaceForm: {
        const SpaceFormReport sf = check_space_form(imm.ambient(), req.c, interior_samples(imm.ambient().interval(), kSpaceFormSamples));
        const double sup = std::max(sf.max_fiber_residual, sf.max_radial_residual);
        entry = detail::check_entry(req.name, detail::status_text(true, sf.passed), sup, {sf.worst_t}, sup,
                                    kSpaceFormTolerance);
        entry["worst"]["point_kind"] = "t";
        break;
      }
      case K::RotationalClassification: {
        const RotationalProfile prof = rotational_profile(*scene.preset, scene.preset_params);
        const ClassificationReport cr = verify_classification(prof, grid);
        entry = detail::check_entry(req.name, detail::status_text(true, cr.classified_soliton), cr.soliton_equation_sup,
                                    cr.worst_point, cr.soliton_equation_sup, kSolitonTolerance);
        entry["verdict"] = cr.classified_soliton ? "ClassifiedSoliton" : "NotClassified";
        json d;
        d["sigma_derivative_sup"] = json_number(cr.sigma_derivative_sup);
        d["soliton_equation_sup"] = json_number(cr.soliton_equation_sup);
        d["soliton_residual_sup"] = json_number(cr.soliton_residual_sup);
        d["log_derivative_spread"] = json_number(cr.log_derivative_spread);
        d["weingarten_sup"] = json_number(cr.weingarten_sup);
        d["angle_sup"] = json_number(cr.angle_sup);
        entry["details"] = d;
        break;
      }
    }
    if (entry["status"] == "fail") all_pass = false;
    checks.push_back(entry);
  }
  report["checks"] = checks;
  report["soliton"] = detail::soliton_block(sol);

  json warnings = json::array();
  if (sol.lambda_advisory) warnings.push_back("lambda is advisory: the trace-free Hessian does not vanish on the grid");
  if (scene.mesh_path) {
    write_obj_file(*scene.mesh_path, sample_surface(imm, scene.samples[0], scene.samples.size() > 1 ? scene.samples[1] : 2));
    warnings.push_back(kMeshWarning);
  }
  report["warnings"] = warnings;
  report["status"] = all_pass ? "pass" : "fail";
  json timing;
  timing["seconds"] = detail::elapsed(start);
  report["timing"] = timing;

  out << "scene: " << (scene.preset ? "preset " + *scene.preset : std::string("custom immersion")) << ", "
      << grid.size() << " grid points\n";
  for (const auto& c : checks) detail::print_check(out, c);
  out << "  soliton verdict " << to_string(sol.verdict) << ", classification " << to_string(sol.classification)
      << ", lambda in [" << detail::fmt(sol.lambda_min) << ", " << detail::fmt(sol.lambda_max) << "]\n";
  for (const auto& w : warnings) out << "warning: " << w.get<std::string>() << '\n';
  return all_pass ? kPass : kCheckFailed;
}

inline int cmd_analyze(const std::string& path, std::ostream& out, std::ostream& err,
                       const std::optional<std::string>& report_override = std::nullopt) {
  return guarded(err, [&] {
    const Scene scene = load_scene(path);
    json report;
    const int code = run_scene(scene, report, out);
    const auto target = report_override ? report_override : scene.report_path;
    if (target) write_report(*target, report);
    return code;
  });
}

struct RotationalOptions {
  double theta = std::numbers::sqrt2 / 2.0;
  std::string f = "exp(t)";
  int n = 2;
  double c1 = 0.0;
  double c2 = 0.0;
  double u0 = 0.0;
  double u1 = 4.0;
  int samples = 21;
  std::optional<std::string> mesh;
  std::optional<std::string> report;
};

inline int run_rotational(const RotationalOptions& o, json& report, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (o.samples < 3) throw SceneError("--samples", "need at least 3 samples per axis");
  if (o.mesh && o.n != 2) throw MeshUnsupported("mesh export needs n = 2, got n = " + std::to_string(o.n));
  RotationalProfile prof;
  prof.theta = o.theta;
  prof.n = o.n;
  prof.c1 = o.c1;
  prof.c2 = o.c2;
  prof.u0 = o.u0;
  prof.u1 = o.u1;
  prof.f = Expression::parse(o.f, {"t"});
  prof.validate();

  const Immersion imm = build_rotational(prof);
  const auto grid = rotational_grid(prof, static_cast<std::size_t>(o.samples));
  detail::probe_grid(imm, grid);
  const ClassificationReport cr = verify_classification(prof, grid);

  report = report_header("rotational");
  json p;
  p["theta"] = o.theta;
  p["f"] = o.f;
  p["n"] = o.n;
  p["c1"] = o.c1;
  p["c2"] = o.c2;
  p["u0"] = o.u0;
  p["u1"] = o.u1;
  p["samples"] = o.samples;
  report["profile"] = p;
  json g;
  g["points"] = grid.size();
  report["grid"] = g;

  json checks = json::array();
  checks.push_back(detail::check_entry("sigma_constancy", detail::status_text(true, cr.sigma_constant),
                                       cr.sigma_derivative_sup, {}, cr.sigma_derivative_sup, kFiniteDifferenceTolerance));
  checks.push_back(detail::check_entry("soliton_equation", detail::status_text(true, cr.soliton_equation),
                                       cr.soliton_equation_sup, cr.worst_point, cr.soliton_equation_sup, kSolitonTolerance));
  checks.push_back(detail::check_entry("soliton_residual", detail::status_text(true, cr.soliton),
                                       cr.soliton_residual_sup, cr.soliton_report.worst_point, cr.soliton_residual_sup,
                                       kSolitonTolerance));
  checks.push_back(detail::check_entry("log_derivative_constancy", detail::status_text(true, cr.log_derivative_constant),
                                       cr.log_derivative_spread, {}, cr.log_derivative_spread, kSolitonTolerance));
  report["checks"] = checks;
  report["verdict"] = cr.classified_soliton ? "ClassifiedSoliton" : "NotClassified";
  json diag;
  diag["weingarten_sup"] = json_number(cr.weingarten_sup);
  diag["angle_sup"] = json_number(cr.angle_sup);
  if (prof.f.is_exp_of_variable()) diag["closed_form_discrepancy"] = json_number(cr.closed_form_discrepancy);
  report["diagnostics"] = diag;
  report["soliton"] = detail::soliton_block(cr.soliton_report);

  json warnings = json::array();
  if (cr.soliton_report.lambda_advisory)
    warnings.push_back("lambda is advisory: the trace-free Hessian does not vanish on the grid");
  if (o.mesh) {
    const std::size_t res = static_cast<std::size_t>(std::max(o.samples, 2));
    write_obj_file(*o.mesh, sample_surface(imm, res, res));
    warnings.push_back(kMeshWarning);
  }
  report["warnings"] = warnings;
  report["status"] = cr.classified_soliton ? "pass" : "fail";
  json timing;
  timing["seconds"] = detail::elapsed(start);
  report["timing"] = timing;

  out << "rotational profile theta=" << warpsol::detail::format_number(o.theta) << " f=" << o.f << " n=" << o.n
      << ", " << grid.size() << " grid points\n";
  for (const auto& c : checks) detail::print_check(out, c);
  out << "  weingarten agreement " << detail::fmt(cr.weingarten_sup) << ", angle constancy " << detail::fmt(cr.angle_sup)
      << '\n';
  out << "  verdict " << report["verdict"].get<std::string>() << '\n';
  for (const auto& w : warnings) out << "warning: " << w.get<std::string>() << '\n';
  return cr.classified_soliton ? kPass : kCheckFailed;
}

inline int cmd_rotational(const RotationalOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json report;
    const int code = run_rotational(o, report, out);
    if (o.report) write_report(*o.report, report);
    return code;
  });
}

inline int cmd_presets(std::ostream& out) {
  for (const auto& p : presets()) {
    out << p.name << ": " << p.description << '\n';
    for (const auto& q : p.parameters) out << "    " << q.name << " = " << q.default_value << "  (" << q.meaning << ")\n";
  }
  return kPass;
}

}  // namespace warpsol::cli
