#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "warpsol/ambient.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/expr.hpp"
#include "warpsol/grid.hpp"
#include "warpsol/hypersurface.hpp"
#include "warpsol/jet.hpp"
#include "warpsol/soliton.hpp"

namespace warpsol {

/// Constant-angle rotational hypersurface in R x_f R^n about the t axis.
struct RotationalProfile {
  double theta = std::numbers::sqrt2 / 2.0;
  Expression f = Expression::parse("exp(t)", {"t"});
  int n = 2;
  double c1 = 0.0;
  double c2 = 0.0;
  double u0 = 0.0;
  double u1 = 4.0;
  /// Base interval of the ambient; defaults to a neighbourhood of alpha([u0, u1]).
  std::optional<Interval> interval;

  double speed() const { return std::sqrt(1.0 - theta * theta); }
  double alpha(double u) const { return u * speed() + c1; }

  void validate() const {
    if (!(theta > 0.0 && theta < 1.0)) throw ConstructionError("theta must lie strictly between 0 and 1");
    if (n < 2) throw ConstructionError("rotational hypersurfaces need n >= 2");
    if (!(u0 < u1)) throw ConstructionError("u range requires u0 < u1");
    if (f.variables() != std::vector<std::string>{"t"})
      throw ConstructionError("warping function must be declared over the single variable t");
  }

  Interval ambient_interval() const {
    if (interval) return *interval;
    const double a = alpha(u0), b = alpha(u1);
    const double pad = 0.05 * (b - a);
    return {a - pad, b + pad};
  }
};

/// Unit vector X(v) in R^n from n-1 hyperspherical angles:
/// X_1 = cos v_1, X_2 = sin v_1 cos v_2, ..., X_n = sin v_1 ... sin v_{n-1}.
inline std::vector<double> sphere_chart(std::span<const double> v) {
  const std::size_t n = v.size() + 1;
  std::vector<double> x(n);
  double s = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    x[i] = s * std::cos(v[i]);
    s *= std::sin(v[i]);
  }
  x[n - 1] = s;
  return x;
}

/// Same map as order-2 jets; the angle v_i is chart variable `offset + i` of `dim`.
inline std::vector<Jet2> sphere_chart_jets(std::span<const double> v, std::size_t offset, std::size_t dim) {
  const std::size_t n = v.size() + 1;
  std::vector<Jet2> x;
  x.reserve(n);
  Jet2 s = Jet2::constant(1.0, dim);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Jet2 vi = Jet2::variable(v[i], offset + i, dim);
    x.push_back(s * cos(vi));
    s = s * sin(vi);
  }
  x.push_back(s);
  return x;
}

struct ProfileCurve {
  std::function<double(double)> alpha;
  std::function<double(double)> beta;
  std::function<double(double)> sigma;  // f(alpha) beta
  std::function<double(double)> beta_closed_form;  // set only for f = e^t
  double closed_form_discrepancy = 0.0;
};

namespace detail {

inline constexpr double kQuadratureTolerance = 1e-12;

struct ProfileData {
  RotationalProfile prof;
  double b0 = 0.0;

  double f(double t) const { return prof.f.evaluate(std::span<const double>(&t, 1)); }

  double integral(double u) const {
    if (u == prof.u0) return 0.0;
    auto integrand = [this](double s) { return prof.theta / f(prof.alpha(s)); };
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, prof.u0, u, 15, kQuadratureTolerance, &err);
    if (!std::isfinite(value) || !(err <= kQuadratureTolerance))
      throw QuadratureFailure("profile quadrature did not reach 1e-12 at u = " + format_number(u));
    return value;
  }

  double beta(double u) const { return b0 + integral(u) + prof.c2; }
};

/// Integration constant at u0 chosen so that the profile closes up with the
/// exponential closed form when f = e^t.
inline double anchor(const RotationalProfile& prof) {
  const double t = prof.alpha(prof.u0);
  static constexpr std::size_t active[] = {0};
  const Jet2 j = prof.f.jet(std::span<const double>(&t, 1), active);
  const double l1 = j.first(0) / j.value();
  if (std::abs(l1) < 1e-14) return 0.0;
  return -prof.theta / (prof.speed() * l1 * j.value());
}

}  // namespace detail

inline ProfileCurve solve_profile(const RotationalProfile& prof) {
  prof.validate();
  auto data = std::make_shared<detail::ProfileData>();
  data->prof = prof;
  data->b0 = detail::anchor(prof);

  const int probes = 33;
  for (int i = 0; i < probes; ++i) {
    const double t = prof.alpha(prof.u0 + (prof.u1 - prof.u0) * i / (probes - 1));
    const double fv = data->f(t);
    if (!(fv > 0.0)) throw DomainError("warping function is not positive at t = " + detail::format_number(t));
  }

  ProfileCurve pc;
  pc.alpha = [data](double u) { return data->prof.alpha(u); };
  pc.beta = [data](double u) { return data->beta(u); };
  pc.sigma = [data](double u) { return data->f(data->prof.alpha(u)) * data->beta(u); };
  if (prof.f.is_exp_of_variable()) {
    pc.beta_closed_form = [data](double u) {
      const auto& p = data->prof;
      return -(p.theta / p.speed()) * std::exp(-p.alpha(u)) + p.c2;
    };
    for (int i = 0; i < probes; ++i) {
      const double u = prof.u0 + (prof.u1 - prof.u0) * i / (probes - 1);
      pc.closed_form_discrepancy = std::max(pc.closed_form_discrepancy, std::abs(pc.beta(u) - pc.beta_closed_form(u)));
    }
  }
  return pc;
}

inline ChartBox rotational_chart(const RotationalProfile& prof) {
  ChartBox box;
  box.names.push_back("u");
  box.lo.push_back(prof.u0);
  box.hi.push_back(prof.u1);
  for (int i = 1; i < prof.n; ++i) {
    box.names.push_back("v" + std::to_string(i));
    const bool last = i == prof.n - 1;
    box.lo.push_back(last ? 0.0 : 0.2);
    box.hi.push_back(last ? 2.0 * std::numbers::pi : std::numbers::pi - 0.2);
  }
  return box;
}

/// psi(u, v) = (alpha(u), beta(u) X(v)).
inline Immersion build_rotational(const RotationalProfile& prof) {
  const ProfileCurve pc = solve_profile(prof);
  WarpedProduct ambient(prof.ambient_interval(), prof.f, FiberModel::FlatEuclidean, prof.n);
  const std::size_t dim = static_cast<std::size_t>(prof.n);
  const double s = prof.speed(), theta = prof.theta;
  auto map = [pc, ambient, dim, s, theta](std::span<const double> p) {
    const double u = p[0];
    const double a = pc.alpha(u);
    const WarpingValues w = ambient.warp(a);
    Jet2 alpha = Jet2::variable(a, 0, dim);
    alpha.set_first(0, s);
    Jet2 beta(dim, pc.beta(u));
    beta.set_first(0, theta / w.f);
    beta.set_second(0, 0, -theta * w.df * s / (w.f * w.f));
    const auto x = sphere_chart_jets(p.subspan(1), 1, dim);
    std::vector<Jet2> out;
    out.reserve(dim + 1);
    out.push_back(alpha);
    for (const auto& xi : x) out.push_back(beta * xi);
    return out;
  };
  std::vector<std::string> text;
  text.push_back("u*" + detail::format_number(s) + "+" + detail::format_number(prof.c1));
  for (std::size_t i = 0; i < dim; ++i) text.push_back("beta(u)*X" + std::to_string(i + 1) + "(v)");
  return Immersion(std::move(ambient), rotational_chart(prof), ComponentMap(map), CatalogueTag::Rotational,
                   std::move(text));
}

struct PrincipalCurvatures {
  double kappa_u = 0.0;
  double kappa_v = 0.0;
};

/// Principal curvatures of the profile direction and of the n-1 orbit directions.
inline PrincipalCurvatures weingarten_closed_form(const RotationalProfile& prof, const ProfileCurve& pc, double u) {
  const double sigma = pc.sigma(u);
  if (std::abs(sigma) < 1e-12) throw SigmaZero("sigma vanishes at u = " + detail::format_number(u));
  const double t = pc.alpha(u);
  static constexpr std::size_t active[] = {0};
  const Jet2 j = prof.f.jet(std::span<const double>(&t, 1), active);
  const double l1 = j.first(0) / j.value();
  return {-l1 * prof.theta, prof.speed() / sigma - l1 * prof.theta};
}

inline PrincipalCurvatures weingarten_closed_form(const RotationalProfile& prof, double u) {
  return weingarten_closed_form(prof, solve_profile(prof), u);
}

struct ClassificationReport {
  double sigma_derivative_sup = 0.0;   // finite differences
  double soliton_equation_sup = 0.0;   // |(f'/f)(1 - theta^2) + theta sqrt(1 - theta^2)/sigma|
  double soliton_residual_sup = 0.0;
  double log_derivative_spread = 0.0;  // max - min of (log f)' over alpha(u)
  double weingarten_sup = 0.0;         // closed form vs numerical eigenvalues
  double angle_sup = 0.0;              // | |theta(p)| - theta |
  double closed_form_discrepancy = 0.0;
  bool sigma_constant = false;
  bool soliton_equation = false;
  bool soliton = false;
  bool log_derivative_constant = false;
  bool classified_soliton = false;
  ChartPoint worst_point;
  SolitonReport soliton_report;
};

inline constexpr double kSigmaStep = 1e-4;

/// Runs the four tests of the exponential-warping characterization over `grid`.
inline ClassificationReport verify_classification(const RotationalProfile& prof, const std::vector<ChartPoint>& grid) {
  const ProfileCurve pc = solve_profile(prof);
  const Immersion imm = build_rotational(prof);
  ClassificationReport rep;
  rep.closed_form_discrepancy = pc.closed_form_discrepancy;

  double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin;
  const double s = prof.speed(), theta = prof.theta;
  for (const auto& p : grid) {
    const double u = p[0];
    const double ds = (pc.sigma(u + kSigmaStep) - pc.sigma(u - kSigmaStep)) / (2.0 * kSigmaStep);
    rep.sigma_derivative_sup = std::max(rep.sigma_derivative_sup, std::abs(ds));

    const double t = pc.alpha(u);
    static constexpr std::size_t active[] = {0};
    const Jet2 j = prof.f.jet(std::span<const double>(&t, 1), active);
    const double l1 = j.first(0) / j.value();
    lmin = std::min(lmin, l1);
    lmax = std::max(lmax, l1);
    const double sigma = pc.sigma(u);
    if (std::abs(sigma) < 1e-12) throw SigmaZero("sigma vanishes at u = " + detail::format_number(u));
    const double eq = std::abs(l1 * s * s + theta * s / sigma);
    if (eq >= rep.soliton_equation_sup) {
      rep.soliton_equation_sup = eq;
      rep.worst_point = p;
    }

    const PrincipalCurvatures pk = weingarten_closed_form(prof, pc, u);
    const ShapeData sd = shape_data(imm, p);
    Mat sym = 0.5 * (sd.shape + sd.shape.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    std::vector<double> numeric(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> closed(static_cast<std::size_t>(prof.n), pk.kappa_v);
    closed[0] = pk.kappa_u;
    std::sort(numeric.begin(), numeric.end());
    std::sort(closed.begin(), closed.end());
    for (std::size_t i = 0; i < closed.size(); ++i)
      rep.weingarten_sup = std::max(rep.weingarten_sup, std::abs(numeric[i] - closed[i]));
    rep.angle_sup = std::max(rep.angle_sup, std::abs(std::abs(sd.theta) - theta));
  }
  rep.log_derivative_spread = grid.empty() ? 0.0 : lmax - lmin;
  rep.soliton_report = soliton_residual(imm, grid);
  rep.soliton_residual_sup = rep.soliton_report.residual_sup;

  rep.sigma_constant = rep.sigma_derivative_sup < kFiniteDifferenceTolerance;
  rep.soliton_equation = rep.soliton_equation_sup < kSolitonTolerance;
  rep.soliton = rep.soliton_residual_sup < kSolitonTolerance;
  rep.log_derivative_constant = rep.log_derivative_spread < kSolitonTolerance;
  rep.classified_soliton = rep.sigma_constant && rep.soliton_equation && rep.soliton && rep.log_derivative_constant;
  return rep;
}

/// Default grid: `samples` points per axis, kept 1e-3 inside the chart box.
inline std::vector<ChartPoint> rotational_grid(const RotationalProfile& prof, std::size_t samples) {
  return make_grid(rotational_chart(prof), samples, 1e-3);
}

}  // namespace warpsol
