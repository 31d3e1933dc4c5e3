#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "warpsol/cli/commands.hpp"

namespace {

// "f;fiber;c" or "f;fiber;c;lo;hi"
warpsol::cli::SpaceFormRow parse_injected(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 5) throw warpsol::SceneError("--inject", "expected f;fiber;c[;lo;hi]");
  warpsol::cli::SpaceFormRow row;
  row.name = "injected";
  row.f = parts[0];
  if (parts[1] == "euclidean")
    row.fiber = warpsol::FiberModel::FlatEuclidean;
  else if (parts[1] == "sphere")
    row.fiber = warpsol::FiberModel::RoundSphere;
  else
    throw warpsol::SceneError("--inject", "fiber must be euclidean or sphere");
  try {
    row.c = std::stod(parts[2]);
    if (parts.size() == 5) row.interval = {std::stod(parts[3]), std::stod(parts[4])};
  } catch (const std::exception&) {
    throw warpsol::SceneError("--inject", "cannot read the numbers in '" + text + "'");
  }
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace warpsol::cli;
  CLI::App app{"Hypersurfaces of warped products and gradient almost Yamabe solitons"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* spaceforms = app.add_subcommand("spaceforms", "check the five space-form models of the warped product table");
  std::vector<std::string> injected;
  spaceforms->add_option("--inject", injected, "extra row f;fiber;c[;lo;hi]")->group("");

  auto* analyze = app.add_subcommand("analyze", "run the checks listed in a scene file");
  std::string scene_path;
  std::string report_path;
  analyze->add_option("scene", scene_path, "scene file (JSON)")->required();
  analyze->add_option("--report", report_path, "write the report here instead of output.report");

  auto* rotational = app.add_subcommand("rotational", "build and verify a constant-angle rotational hypersurface");
  RotationalOptions ro;
  std::string mesh_out, rot_report;
  rotational->add_option("--theta", ro.theta, "constant angle in (0, 1)")->capture_default_str();
  rotational->add_option("--f", ro.f, "warping function of t")->capture_default_str();
  rotational->add_option("--n", ro.n, "fiber dimension")->capture_default_str();
  rotational->add_option("--c1", ro.c1, "height offset")->capture_default_str();
  rotational->add_option("--c2", ro.c2, "profile offset")->capture_default_str();
  rotational->add_option("--u0", ro.u0, "start of the profile")->capture_default_str();
  rotational->add_option("--u1", ro.u1, "end of the profile")->capture_default_str();
  rotational->add_option("--samples", ro.samples, "grid samples per chart axis")->capture_default_str();
  rotational->add_option("--mesh", mesh_out, "write an OBJ mesh (n = 2 only)");
  rotational->add_option("--report", rot_report, "write a JSON report");

  auto* presets_cmd = app.add_subcommand("presets", "list the catalogue of preset immersions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (*spaceforms) {
    return guarded(std::cerr, [&] {
      std::vector<SpaceFormRow> rows;
      for (const auto& s : injected) rows.push_back(parse_injected(s));
      return cmd_spaceforms(std::cout, std::cerr, rows);
    });
  }
  if (*analyze) {
    std::optional<std::string> override;
    if (!report_path.empty()) override = report_path;
    return cmd_analyze(scene_path, std::cout, std::cerr, override);
  }
  if (*rotational) {
    if (!mesh_out.empty()) ro.mesh = mesh_out;
    if (!rot_report.empty()) ro.report = rot_report;
    return cmd_rotational(ro, std::cout, std::cerr);
  }
  if (*presets_cmd) return cmd_presets(std::cout);
  return kUsage;
}
