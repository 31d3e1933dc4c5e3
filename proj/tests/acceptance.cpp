// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "warpsol/ambient.hpp"
#include "warpsol/catalogue.hpp"
#include "warpsol/cli/mesh.hpp"
#include "warpsol/grid.hpp"
#include "warpsol/intrinsic.hpp"
#include "warpsol/rotational.hpp"
#include "warpsol/soliton.hpp"

using namespace warpsol;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

PresetParams dim(int n) {
  PresetParams p;
  p.values["n"] = n;
  return p;
}

/// Catalogue at n = 1, 2, 3 plus 20 bump-jittered variants.
std::vector<std::pair<std::string, Immersion>> lemma_family() {
  std::vector<std::pair<std::string, Immersion>> out;
  for (int n : {1, 2, 3})
    for (auto& [name, imm] : catalogue(n)) out.emplace_back(name + " n=" + std::to_string(n), imm);
  std::mt19937 rng(20240);
  const char* bases[] = {"hyperplane", "sphere", "horosphere", "slice"};
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    out.emplace_back(std::string("perturbed ") + bases[k % 4], oracle::perturbed(make_preset(bases[k % 4], dim(n)), rng));
  }
  return out;
}

/// About 25 interior points regardless of dimension.
std::vector<ChartPoint> grid25(const Immersion& imm) {
  const std::size_t per = imm.n() == 1 ? 25 : imm.n() == 2 ? 5 : 3;
  return make_grid(imm.chart(), per, 0.05);
}

Outcome space_forms() {
  const auto start = Clock::now();
  Outcome o;
  double worst = 0.0;
  int passed = 0;
  for (const auto& m : space_form_models()) {
    const auto w = WarpedProduct::make(m.interval, m.f, m.fiber, 2);
    const auto rep = check_space_form(w, m.c, interior_samples(m.interval, 200));
    worst = std::max({worst, rep.max_fiber_residual, rep.max_radial_residual});
    if (rep.passed && rep.max_fiber_residual < 1e-10 && rep.max_radial_residual < 1e-10) ++passed;
  }
  const double t = seconds(start);
  o.pass = passed == 5 && t < 1.0;
  o.detail = fmt("%.0f/5 models, max residual %.2e, %.3f s", passed, worst, t);
  return o;
}

Outcome lemma_universality() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t immersions = 0, points = 0;
  for (const auto& [name, imm] : lemma_family()) {
    for (const auto& p : grid25(imm)) {
      const auto hh = hessian_height(imm, p);
      worst = std::max(worst, (hh.lemma - hh.direct).cwiseAbs().maxCoeff());
      ++points;
    }
    ++immersions;
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = worst < 1e-7 && t < 30.0 && immersions >= 33;
  o.detail = fmt("%.0f immersions, %.0f points, max |L - D| %.2e", immersions, points, worst) + fmt(", %.2f s", t);
  return o;
}

Outcome angle_identity() {
  auto family = lemma_family();
  family.emplace_back("example5", make_preset("example5"));
  PresetParams sine;
  sine.f = "sin(t)";
  sine.values["theta"] = 0.5;
  sine.values["u0"] = 0.5;
  sine.values["u1"] = 1.0;
  family.emplace_back("rotational sin", make_preset("rotational", sine));
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& [name, imm] : family)
    for (const auto& p : grid25(imm)) {
      const auto sd = shape_data(imm, p);
      worst = std::max(worst, std::abs(sd.grad_h_norm2 + sd.theta * sd.theta - 1.0));
      ++points;
    }
  Outcome o;
  o.pass = worst < 1e-10;
  o.detail = fmt("%.0f points, max ||grad h|^2 + theta^2 - 1| %.2e", points, worst);
  return o;
}

Outcome scalar_triangulation() {
  struct Case {
    const char* preset;
    double expected;
  };
  const Case cases[] = {{"hyperplane", 0.0}, {"sphere", 2.0}, {"horosphere", 0.0}, {"example5", 0.0}};
  Outcome o;
  double formula = 0.0, fd = 0.0, value = 0.0;
  for (const auto& c : cases) {
    const auto imm = make_preset(c.preset, dim(2));
    for (const auto& p : make_grid(imm.chart(), 5, 0.05)) {
      const auto cp = curvature_package(imm, p);
      const double oracle_scal = oracle::scalar_curvature_fd(imm, p);
      formula = std::max(formula, std::abs(cp.scal_gauss - cp.scal_formula));
      fd = std::max({fd, std::abs(cp.scal_gauss - oracle_scal), std::abs(cp.scal_formula - oracle_scal)});
      value = std::max(value, std::abs(cp.scal_gauss - c.expected));
    }
  }
  o.pass = formula < 1e-6 && fd < 1e-3 && value < 1e-6;
  o.detail = fmt("gauss vs formula %.2e, vs fd oracle %.2e, vs expected values %.2e", formula, fd, value);
  return o;
}

Outcome example_solitons() {
  Outcome o;
  std::string cls;
  double residual = 0.0, lambda_err = 0.0;
  auto run = [&](const char* name, const Immersion& imm, Classification want) {
    const auto grid = make_grid(imm.chart(), 5, 0.05);
    const auto rep = soliton_residual(imm, grid);
    residual = std::max(residual, rep.residual_sup);
    if (rep.verdict != Verdict::Soliton || rep.classification != want) {
      o.pass = false;
      cls += std::string(" ") + name + "=" + std::string(to_string(rep.classification));
    }
    return rep;
  };
  const auto hp = run("hyperplane", make_preset("hyperplane", dim(2)), Classification::Steady);
  for (double l : hp.lambda_samples) lambda_err = std::max(lambda_err, std::abs(l));
  const auto sl = run("slice", make_preset("slice", dim(2)), Classification::Trivial);
  for (std::size_t i = 0; i < sl.grid.size(); ++i)
    lambda_err = std::max(lambda_err, std::abs(sl.lambda_samples[i] - sl.scal_samples[i]));
  const auto e5 = run("example5", make_preset("example5"), Classification::Steady);
  for (std::size_t i = 0; i < e5.grid.size(); ++i)
    lambda_err = std::max({lambda_err, std::abs(e5.lambda_samples[i]), std::abs(e5.scal_samples[i])});
  for (int n : {2, 3}) {
    const auto sph = make_preset("sphere", dim(n));
    const auto rep = run("sphere", sph, Classification::Shrinking);
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
      const double h = shape_data(sph, rep.grid[i]).h;
      lambda_err = std::max(lambda_err, std::abs(rep.lambda_samples[i] - (n * (n - 1.0) + h)));
    }
  }
  run("horosphere", make_preset("horosphere", dim(2)), Classification::Trivial);
  o.pass = o.pass && residual < 1e-7 && lambda_err < 1e-7;
  o.detail = fmt("max residual %.2e, max lambda error %.2e", residual, lambda_err) + (cls.empty() ? "" : "; wrong:" + cls);
  return o;
}

Outcome classification_dichotomy() {
  const auto start = Clock::now();
  struct Case {
    const char* f;
    double theta, u0, u1;
    bool soliton;
  };
  const Case cases[] = {{"exp(t)", std::numbers::sqrt2 / 2, 0.0, 4.0, true},
                        {"3*exp(2*t)", 0.5, 0.0, 2.0, true},
                        {"sin(t)", 0.5, 0.5, 1.0, false},
                        {"t^2+1", 0.5, 0.5, 1.5, false},
                        {"cosh(t)", 0.5, 0.5, 1.5, false}};
  Outcome o;
  double weingarten = 0.0, sigma = 0.0, sss_min = 1e300;
  std::string wrong;
  for (const auto& c : cases) {
    RotationalProfile prof;
    prof.f = Expression::parse(c.f, {"t"});
    prof.theta = c.theta;
    prof.u0 = c.u0;
    prof.u1 = c.u1;
    const auto rep = verify_classification(prof, rotational_grid(prof, 11));
    weingarten = std::max(weingarten, rep.weingarten_sup);
    if (c.soliton) {
      sigma = std::max(sigma, rep.sigma_derivative_sup);
    } else {
      sss_min = std::min(sss_min, rep.soliton_equation_sup);
      if (!(rep.soliton_equation_sup > 1e-2)) o.pass = false;
    }
    if (rep.classified_soliton != c.soliton) {
      o.pass = false;
      wrong += std::string(" ") + c.f;
    }
  }
  const double t = seconds(start);
  o.pass = o.pass && weingarten < 1e-6 && sigma < 1e-4 && t < 10.0;
  o.detail = fmt("weingarten %.2e, sigma' %.2e, min non-exponential residual %.2e", weingarten, sigma, sss_min) +
             fmt(", %.2f s", t) + (wrong.empty() ? "" : "; misclassified:" + wrong);
  return o;
}

Outcome figure_mesh() {
  const auto path = (std::filesystem::temp_directory_path() / "warpsol_acceptance_funnel.obj").string();
  std::filesystem::remove(path);
  const std::string cmd = std::string(WARPSOL_CLI_PATH) +
                          " rotational --theta 0.7071067811865476 --f 'exp(t)' --n 2 --samples 21 --mesh " + path +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    o.pass = false;
    o.detail = "rotational command did not exit 0";
    return o;
  }
  std::ifstream in(path);
  const auto obj = cli::read_obj(in);
  const std::size_t rows = 21, cols = 21;
  if (obj.vertices.size() != rows * cols || obj.faces.size() != 2 * (rows - 1) * (cols - 1)) {
    o.pass = false;
    o.detail = "unexpected vertex or face count";
    return o;
  }
  double t_err = 0.0, r_err = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& v = obj.vertices[i * cols + j];
      const double u = 4.0 * static_cast<double>(i) / static_cast<double>(rows - 1);
      const double beta = -std::exp(-u / std::numbers::sqrt2);  // closed form for theta = sqrt(2)/2
      t_err = std::max(t_err, std::abs(v[0] - u / std::numbers::sqrt2));
      r_err = std::max(r_err, std::abs(std::hypot(v[1], v[2]) - std::abs(beta)));
    }
  o.pass = t_err < 1e-12 && r_err < 1e-10;
  o.detail = fmt("%.0f vertices, t error %.2e, radial error %.2e", obj.vertices.size(), t_err, r_err);
  return o;
}

Outcome structural() {
  double worst = 0.0;
  bool applicable = true;
  std::vector<Immersion> list{make_preset("sphere", dim(2)), make_preset("sphere", dim(3)), make_preset("example5")};
  for (const auto& imm : list) {
    const auto rep = structural_identity(imm, make_grid(imm.chart(), imm.n() == 3 ? 4 : 7, 0.05));
    applicable = applicable && rep.applicable;
    worst = std::max(worst, rep.sup_error);
  }
  Outcome o;
  o.pass = applicable && worst < 1e-4;
  o.detail = fmt("sphere n=2,3 and rotational example, max error %.2e", worst);
  return o;
}

Outcome properties() {
  std::mt19937 rng(77);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_vec = [&](std::size_t n) {
    Vec v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = gauss(rng);
    return v;
  };

  // ambient tensor symmetries
  double bianchi = 0.0, antisym = 0.0, compat = 0.0;
  std::vector<WarpedProduct> ambients;
  for (const auto& m : space_form_models()) ambients.push_back(WarpedProduct::make(m.interval, m.f, m.fiber, 3));
  ambients.push_back(WarpedProduct::make({0.1, 3.0}, "t^2+cosh(t)", FiberModel::RoundSphere, 3));
  for (const auto& w : ambients) {
    const auto ts = interior_samples(w.interval(), 4);
    for (double t : ts) {
      AmbientPoint p{t, {}};
      for (int i = 0; i < w.n(); ++i)
        p.x.push_back(w.fiber() == FiberModel::RoundSphere ? 0.5 + 2.0 * unit(rng) : 2.0 * unit(rng) - 1.0);
      const Vec x = random_vec(w.dim()), y = random_vec(w.dim()), z = random_vec(w.dim()), u = random_vec(w.dim());
      const Mat g = ambient_metric(w, p);
      const Vec rxy = ambient_curvature(w, p, x, y, z);
      antisym = std::max(antisym, (rxy + ambient_curvature(w, p, y, x, z)).cwiseAbs().maxCoeff());
      const double a = rxy.dot(g * u), b = ambient_curvature(w, p, x, y, u).dot(g * z);
      antisym = std::max(antisym, std::abs(a + b));
      bianchi = std::max(bianchi, (rxy + ambient_curvature(w, p, y, z, x) + ambient_curvature(w, p, z, x, y)).cwiseAbs().maxCoeff());
      const auto mj = ambient_metric_jet(w, p);
      const auto gam = ambient_christoffels(w, p);
      const double scale = 1.0 + mj.g.cwiseAbs().maxCoeff();
      for (std::size_t i = 0; i < w.dim(); ++i)
        for (std::size_t j = 0; j < w.dim(); ++j)
          for (std::size_t k = 0; k < w.dim(); ++k) {
            double r = mj.dg[i](j, k);
            for (std::size_t d = 0; d < w.dim(); ++d) r -= gam(d, i, j) * mj.g(d, k) + gam(d, i, k) * mj.g(j, d);
            compat = std::max(compat, std::abs(r) / scale);
          }
    }
  }

  // self-adjointness and orientation invariance
  double self_adjoint = 0.0, flip_lambda = 0.0;
  bool flip_verdict = true;
  for (const auto& [name, imm] : lemma_family()) {
    const auto grid = make_grid(imm.chart(), 3, 0.1);
    for (const auto& p : grid) {
      const auto sd = shape_data(imm, p);
      const Mat ga = sd.g * sd.shape;
      self_adjoint = std::max(self_adjoint, (ga - ga.transpose()).cwiseAbs().maxCoeff());
    }
    const auto a = soliton_residual(imm, grid), b = soliton_residual(imm.flipped(), grid);
    flip_verdict = flip_verdict && a.verdict == b.verdict && a.classification == b.classification;
    for (std::size_t i = 0; i < grid.size(); ++i)
      flip_lambda = std::max(flip_lambda, std::abs(a.lambda_samples[i] - b.lambda_samples[i]));
  }

  // jets against finite differences
  double jet1 = 0.0, jet2 = 0.0;
  const std::vector<std::string> vars{"u", "v", "w"};
  const std::size_t active[] = {0, 1, 2};
  const double h = 1e-5;
  for (int k = 0; k < 200; ++k) {
    const auto e = Expression::parse(oracle::random_expression(rng, vars), vars);
    std::vector<double> p{2 * unit(rng) - 1, 2 * unit(rng) - 1, 2 * unit(rng) - 1};
    const Jet2 j = e.jet(p, active);
    for (std::size_t i = 0; i < 3; ++i) {
      auto q = p, r = p;
      q[i] += h;
      r[i] -= h;
      const Jet2 jp = e.jet(q, active), jm = e.jet(r, active);
      jet1 = std::max(jet1, std::abs(j.first(i) - (jp.value() - jm.value()) / (2 * h)) / (1 + std::abs(j.first(i))));
      for (std::size_t m = 0; m < 3; ++m)
        jet2 = std::max(jet2, std::abs(j.second(i, m) - (jp.first(m) - jm.first(m)) / (2 * h)) / (1 + std::abs(j.second(i, m))));
    }
  }

  Outcome o;
  o.pass = bianchi < 1e-8 && antisym < 1e-8 && compat < 1e-8 && self_adjoint < 1e-8 && flip_verdict && flip_lambda < 1e-10 &&
           jet1 < 1e-6 && jet2 < 1e-4;
  o.detail = fmt("bianchi %.1e, antisymmetry %.1e, compatibility %.1e", bianchi, antisym, compat) +
             fmt(", self-adjoint %.1e, flip lambda %.1e", self_adjoint, flip_lambda) +
             (flip_verdict ? "" : ", flip changed a verdict") + fmt(", jets %.1e / %.1e", jet1, jet2);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"space-form table", space_forms},
      {"lemma identity on catalogue and perturbations", lemma_universality},
      {"gradient/angle identity", angle_identity},
      {"scalar curvature triangulation", scalar_triangulation},
      {"example solitons and classifications", example_solitons},
      {"rotational classification dichotomy", classification_dichotomy},
      {"rotational mesh export", figure_mesh},
      {"structural identity", structural},
      {"property suites", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
