#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpsol/ambient.hpp"
#include "warpsol/grid.hpp"
#include "warpsol/hypersurface.hpp"
#include "warpsol/intrinsic.hpp"
#include "warpsol/linalg.hpp"

namespace warpsol {

/// Threshold on quantities computed from exact jets.
inline constexpr double kSolitonTolerance = 1e-7;
/// Threshold whenever a finite-difference quantity enters.
inline constexpr double kFiniteDifferenceTolerance = 1e-4;
/// Absolute threshold for the trivial / steady / expanding / shrinking decision.
inline constexpr double kClassificationTolerance = 1e-8;
/// Slack allowed on pointwise inequalities that hold with equality.
inline constexpr double kHypothesisTolerance = 1e-9;

/// Hess h by two routes at one chart point.
struct HessianPaths {
  Mat lemma;   // (f'/f)(h) (g - dh (x) dh) + theta II
  Mat direct;  // d_ij h - Gamma^k_ij d_k h with the induced Levi-Civita connection
};

namespace detail {

/// d_k g_ij of the induced metric, from order-2 jets of psi and the ambient metric jet.
inline std::vector<Mat> induced_metric_derivatives(const LocalFrame& lf) {
  const Eigen::Index n = lf.g.rows(), dim = n + 1;
  std::vector<Mat> dg(static_cast<std::size_t>(n), Mat::Zero(n, n));
  const Mat& G = lf.metric.g;
  for (Eigen::Index k = 0; k < n; ++k) {
    Mat dG = Mat::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) dG += lf.metric.dg[static_cast<std::size_t>(c)] * lf.frame(c, k);
    Mat d2(dim, n);
    for (Eigen::Index i = 0; i < n; ++i)
      d2.col(i) = second_derivative(lf.psi, static_cast<std::size_t>(k), static_cast<std::size_t>(i));
    const Mat cross = d2.transpose() * G * lf.frame;
    dg[static_cast<std::size_t>(k)] = lf.frame.transpose() * dG * lf.frame + cross + cross.transpose();
  }
  return dg;
}

inline Christoffels induced_christoffels(const LocalFrame& lf) {
  return christoffels_from_metric(lf.g, induced_metric_derivatives(lf));
}

inline Vec height_differential(const LocalFrame& lf) {
  Vec dh(lf.g.rows());
  for (Eigen::Index i = 0; i < dh.size(); ++i) dh[i] = lf.psi[0].first(static_cast<std::size_t>(i));
  return dh;
}

inline HessianPaths hessian_height(const LocalFrame& lf) {
  const Eigen::Index n = lf.g.rows();
  const Vec dh = height_differential(lf);
  const double theta = (lf.metric.g * lf.normal)[0];
  HessianPaths hp;
  hp.lemma = lf.warp.log_d1() * (lf.g - dh * dh.transpose()) + theta * lf.second_form;

  const Christoffels gamma = induced_christoffels(lf);
  hp.direct.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = lf.psi[0].second(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      for (Eigen::Index k = 0; k < n; ++k)
        s -= gamma(static_cast<std::size_t>(k), static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * dh[k];
      hp.direct(i, j) = s;
    }
  return hp;
}

/// g-operator norm of the trace-free part of the symmetric form `hess`.
inline double trace_free_norm(const Mat& hess, const Mat& g) {
  const double n = static_cast<double>(g.rows());
  const double mean = (g.inverse() * hess).trace() / n;
  const Mat tf = hess - mean * g;
  Eigen::LLT<Mat> llt(g);
  const Mat lower = llt.matrixL();
  const Mat tmp = lower.triangularView<Eigen::Lower>().solve(tf);
  const Mat sym = lower.triangularView<Eigen::Lower>().solve(tmp.transpose());
  return spectral_norm_symmetric(0.5 * (sym + sym.transpose()));
}

/// Everything soliton-related at one point.
struct SolitonSample {
  ChartPoint point;
  double residual = 0.0;        // trace-free Hessian norm
  double lambda = 0.0;          // scal - (Delta h)/n
  double scal = 0.0;
  double laplacian_over_n = 0.0;
  double grad_h_norm = 0.0;
  double lemma_error = 0.0;     // |path L - path D|_inf
  double trace_error = 0.0;     // |tr_g Hess h - ((f'/f)(n - |grad h|^2) + n theta H)|
  double H = 0.0;
  double theta = 0.0;
  double h = 0.0;
  WarpingValues warp;
  CurvaturePackage curvature;
};

inline SolitonSample soliton_sample(const Immersion& imm, std::span<const double> p) {
  const LocalFrame lf = local_frame(imm, p);
  const ShapeData sd = to_shape_data(lf);
  const HessianPaths hp = hessian_height(lf);
  SolitonSample s;
  s.point.assign(p.begin(), p.end());
  s.curvature = curvature_package(lf, imm.ambient().k());
  const double n = static_cast<double>(lf.g.rows());
  s.laplacian_over_n = (lf.ginv * hp.direct).trace() / n;
  s.scal = s.curvature.scal_gauss;
  s.lambda = s.scal - s.laplacian_over_n;
  s.residual = trace_free_norm(hp.direct, lf.g);
  s.grad_h_norm = std::sqrt(std::max(0.0, sd.grad_h_norm2));
  s.lemma_error = max_abs(hp.lemma - hp.direct);
  const double trace_lemma = (lf.ginv * hp.lemma).trace();
  s.trace_error = std::abs(trace_lemma - (lf.warp.log_d1() * (n - sd.grad_h_norm2) + n * sd.theta * sd.H));
  s.H = sd.H;
  s.theta = sd.theta;
  s.h = sd.h;
  s.warp = lf.warp;
  return s;
}

}  // namespace detail

inline HessianPaths hessian_height(const Immersion& imm, std::span<const double> p) {
  return detail::hessian_height(detail::local_frame(imm, p));
}

/// lambda(p) = scal(p) - (tr_g Hess h)(p) / n
inline double soliton_lambda(const Immersion& imm, std::span<const double> p) {
  return detail::soliton_sample(imm, p).lambda;
}

enum class Verdict { Soliton, NotSoliton };
enum class Classification { Trivial, Expanding, Steady, Shrinking, SignChanging };

inline std::string_view to_string(Verdict v) { return v == Verdict::Soliton ? "Soliton" : "NotSoliton"; }

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "Trivial";
    case Classification::Expanding: return "Expanding";
    case Classification::Steady: return "Steady";
    case Classification::Shrinking: return "Shrinking";
    case Classification::SignChanging: return "SignChanging";
  }
  return "SignChanging";
}

struct SolitonReport {
  std::vector<ChartPoint> grid;
  std::vector<double> residuals;
  std::vector<double> lambda_samples;
  std::vector<double> scal_samples;
  double residual_sup = 0.0;
  ChartPoint worst_point;
  Verdict verdict = Verdict::NotSoliton;
  Classification classification = Classification::SignChanging;
  /// lambda is only meaningful when the trace-free residual vanishes.
  bool lambda_advisory = true;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double grad_h_sup = 0.0;
  std::map<std::string, double> identity_checks;
};

inline Classification classify(const std::vector<double>& lambdas, double grad_h_sup) {
  if (grad_h_sup < kClassificationTolerance) return Classification::Trivial;
  const bool all_zero = std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return std::abs(l) < kClassificationTolerance; });
  if (all_zero) return Classification::Steady;
  if (std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return l < -kClassificationTolerance; }))
    return Classification::Expanding;
  if (std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return l > kClassificationTolerance; }))
    return Classification::Shrinking;
  return Classification::SignChanging;
}

/// Pointwise test of Hess h = (scal - lambda) g over `grid`.
inline SolitonReport soliton_residual(const Immersion& imm, const std::vector<ChartPoint>& grid) {
  SolitonReport rep;
  rep.grid = grid;
  double lemma_sup = 0.0, trace_sup = 0.0;
  rep.lambda_min = std::numeric_limits<double>::infinity();
  rep.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : grid) {
    const detail::SolitonSample s = detail::soliton_sample(imm, p);
    rep.residuals.push_back(s.residual);
    rep.lambda_samples.push_back(s.lambda);
    rep.scal_samples.push_back(s.scal);
    if (s.residual >= rep.residual_sup) {
      rep.residual_sup = s.residual;
      rep.worst_point = p;
    }
    rep.lambda_min = std::min(rep.lambda_min, s.lambda);
    rep.lambda_max = std::max(rep.lambda_max, s.lambda);
    rep.grad_h_sup = std::max(rep.grad_h_sup, s.grad_h_norm);
    lemma_sup = std::max(lemma_sup, s.lemma_error);
    trace_sup = std::max(trace_sup, s.trace_error);
  }
  rep.verdict = rep.residual_sup < kSolitonTolerance ? Verdict::Soliton : Verdict::NotSoliton;
  rep.lambda_advisory = rep.verdict != Verdict::Soliton;
  rep.classification = classify(rep.lambda_samples, rep.grad_h_sup);
  rep.identity_checks["lemma1"] = lemma_sup;
  rep.identity_checks["trace"] = trace_sup;
  return rep;
}

struct StructuralReport {
  bool applicable = false;
  double sup_error = 0.0;
  ChartPoint worst_point;
};

/// sup |Ric(grad h) + (n-1) grad(scal - lambda)|_g, the gradient taken by central
/// differences with spacing `step` around each grid point. Only evaluated on solitons.
inline StructuralReport structural_identity(const Immersion& imm, const std::vector<ChartPoint>& grid, double step = 1e-3) {
  if (!(step > 0.0) || step > 1e-2) throw GridTooCoarse("structural identity needs a lattice spacing in (0, 1e-2]");
  StructuralReport rep;
  rep.applicable = soliton_residual(imm, grid).verdict == Verdict::Soliton;
  if (!rep.applicable) return rep;
  for (const auto& p : grid) {
    if (!imm.chart().is_interior(p, step + kBoundaryMargin))
      throw BoundaryTooClose("structural identity stencil leaves the chart box");
    const detail::LocalFrame lf = detail::local_frame(imm, p);
    const ShapeData sd = detail::to_shape_data(lf);
    const CurvaturePackage cp = detail::curvature_package(lf, imm.ambient().k());
    const Eigen::Index n = lf.g.rows();
    Vec err = cp.ric * sd.grad_h;
    for (Eigen::Index i = 0; i < n; ++i) {
      ChartPoint plus = p, minus = p;
      plus[static_cast<std::size_t>(i)] += step;
      minus[static_cast<std::size_t>(i)] -= step;
      const double qp = detail::soliton_sample(imm, plus).laplacian_over_n;
      const double qm = detail::soliton_sample(imm, minus).laplacian_over_n;
      err[i] += static_cast<double>(n - 1) * (qp - qm) / (2.0 * step);
    }
    const double norm = std::sqrt(std::max(0.0, err.dot(lf.ginv * err)));
    if (norm >= rep.sup_error) {
      rep.sup_error = norm;
      rep.worst_point = p;
    }
  }
  return rep;
}

enum class Theorem { Theorem1, Theorem3, Theorem4a, Theorem4b, Theorem5 };

inline std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::Theorem1: return "theorem1";
    case Theorem::Theorem3: return "theorem3";
    case Theorem::Theorem4a: return "theorem4a";
    case Theorem::Theorem4b: return "theorem4b";
    case Theorem::Theorem5: return "theorem5";
  }
  return "theorem1";
}

enum class Orientation { Both, AsGiven, Flipped };

inline std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Both: return "both";
    case Orientation::AsGiven: return "as_given";
    case Orientation::Flipped: return "flipped";
  }
  return "both";
}

/// One inequality or identity evaluated over the grid. For inequalities
/// `worst` is the smallest slack (negative means violated); for identities it
/// is the largest error.
struct ConditionResult {
  std::string name;
  Orientation orientation = Orientation::Both;
  bool identity = false;
  bool passed = true;
  double worst = 0.0;
  ChartPoint worst_point;
  std::vector<double> margins;
};

struct HypothesisReport {
  Theorem theorem = Theorem::Theorem1;
  bool applicable = true;
  std::string reason;
  bool passed_as_given = false;
  bool passed_flipped = false;
  bool passed = false;
  std::vector<ConditionResult> conditions;
};

namespace detail {

inline ConditionResult inequality(std::string name, Orientation o, const std::vector<ChartPoint>& grid,
                                  std::vector<double> margins) {
  ConditionResult c;
  c.name = std::move(name);
  c.orientation = o;
  c.worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < margins.size(); ++i)
    if (margins[i] < c.worst) {
      c.worst = margins[i];
      c.worst_point = grid[i];
    }
  c.passed = c.worst >= -kHypothesisTolerance;
  c.margins = std::move(margins);
  return c;
}

inline ConditionResult identity(std::string name, const std::vector<ChartPoint>& grid, std::vector<double> errors,
                                double tol) {
  ConditionResult c;
  c.name = std::move(name);
  c.identity = true;
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i] >= c.worst) {
      c.worst = errors[i];
      c.worst_point = grid[i];
    }
  c.passed = c.worst < tol;
  c.margins = std::move(errors);
  return c;
}

/// (f')^2 - f f'' over the ambient probe grid: {inf, sup}.
inline std::pair<double, double> fiber_bound_range(const WarpedProduct& w) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double t : w.probe_grid(WarpedProduct::kProbeCount)) {
    const WarpingValues v = w.warp(t);
    const double q = v.df * v.df - v.f * v.d2f;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {lo, hi};
}

inline void finalize(HypothesisReport& rep) {
  auto ok = [&](Orientation o) {
    return std::all_of(rep.conditions.begin(), rep.conditions.end(),
                       [&](const ConditionResult& c) { return c.orientation == Orientation::Both || c.orientation == o ? c.passed : true; });
  };
  rep.passed_as_given = ok(Orientation::AsGiven);
  rep.passed_flipped = ok(Orientation::Flipped);
  rep.passed = rep.passed_as_given || rep.passed_flipped;
}

}  // namespace detail

/// Pointwise hypotheses and identities of the rigidity results. Conditions that
/// depend on the orientation of N are reported for both orientations.
inline HypothesisReport check_hypotheses(const Immersion& imm, const std::vector<ChartPoint>& grid, Theorem which) {
  HypothesisReport rep;
  rep.theorem = which;
  std::vector<detail::SolitonSample> samples;
  samples.reserve(grid.size());
  for (const auto& p : grid) samples.push_back(detail::soliton_sample(imm, p));
  const double n = static_cast<double>(imm.n());
  const double k = imm.ambient().k();
  auto collect = [&](auto&& fn) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(fn(s));
    return out;
  };

  switch (which) {
    case Theorem::Theorem1: {
      const auto [lo, hi] = detail::fiber_bound_range(imm.ambient());
      (void)lo;
      rep.conditions.push_back(detail::inequality("fiber_curvature_lower", Orientation::Both, grid,
                                                  collect([&](const auto&) { return k - hi; })));
      rep.conditions.push_back(detail::inequality("warping_bound", Orientation::Both, grid, collect([&](const auto& s) {
        return (n + 1.0) / (n * n) * s.H * s.H - s.warp.d2f / s.warp.f;
      })));
      for (Orientation o : {Orientation::AsGiven, Orientation::Flipped}) {
        const double sign = o == Orientation::AsGiven ? 1.0 : -1.0;
        rep.conditions.push_back(detail::inequality("angle_bound", o, grid, collect([&](const auto& s) {
          const double l1 = s.warp.log_d1();
          const double at = std::abs(s.theta);
          if (at < 1e-12) return l1 == 0.0 ? std::min(0.0, sign * s.H) : -std::numeric_limits<double>::infinity();
          const double q = l1 / at;
          return std::min(q, sign * s.H - q);
        })));
      }
      break;
    }
    case Theorem::Theorem3: {
      double hsup = 0.0;
      for (const auto& s : samples) hsup = std::max(hsup, std::abs(s.H));
      if (hsup >= kClassificationTolerance) {
        rep.applicable = false;
        rep.reason = "immersion is not minimal (sup |H| = " + detail::format_number(hsup) + ")";
        return rep;
      }
      rep.conditions.push_back(detail::identity("minimal_identity", grid, collect([&](const auto& s) {
        return std::abs(n * (s.scal - s.lambda) - s.warp.log_d1() * (n - 1.0 + s.theta * s.theta));
      }), kSolitonTolerance));
      break;
    }
    case Theorem::Theorem4a:
    case Theorem::Theorem4b: {
      const auto [lo, hi] = detail::fiber_bound_range(imm.ambient());
      (void)hi;
      rep.conditions.push_back(detail::inequality("fiber_curvature_upper", Orientation::Both, grid,
                                                  collect([&](const auto&) { return lo - k; })));
      const bool a = which == Theorem::Theorem4a;
      rep.conditions.push_back(detail::inequality("lambda_bound", Orientation::Both, grid, collect([&](const auto& s) {
        const double ratio = s.warp.d2f / s.warp.f;
        const double bound = a ? -n * (n - 1.0) * ratio + n * n * s.H * s.H : n * (n - 1.0) * (s.H * s.H - ratio);
        return s.lambda - bound;
      })));
      break;
    }
    case Theorem::Theorem5: {
      std::vector<double> heights = collect([](const auto& s) { return s.h; });
      const WarpingValues w0 = samples.empty() ? WarpingValues{} : samples.front().warp;
      const double c = -w0.d2f / w0.f;
      const SpaceFormReport sf = check_space_form(imm.ambient(), c, heights);
      if (!sf.passed) {
        rep.applicable = false;
        rep.reason = "ambient is not a space form along the sampled heights";
        return rep;
      }
      rep.conditions.push_back(detail::inequality("lambda_bound", Orientation::Both, grid, collect([&](const auto& s) {
        return s.lambda - ((n - 1.0) * c + n * s.H * s.H);
      })));
      break;
    }
  }
  detail::finalize(rep);
  return rep;
}

}  // namespace warpsol
