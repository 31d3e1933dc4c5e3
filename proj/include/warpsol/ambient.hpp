#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "warpsol/errors.hpp"
#include "warpsol/expr.hpp"
#include "warpsol/jet.hpp"
#include "warpsol/linalg.hpp"

namespace warpsol {

enum class FiberModel { FlatEuclidean, RoundSphere };

inline std::string_view to_string(FiberModel m) {
  return m == FiberModel::FlatEuclidean ? "euclidean" : "sphere";
}

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return t > lo && t < hi; }
};

/// f, f', f'' at one base point.
struct WarpingValues {
  double f = 1.0;
  double df = 0.0;
  double d2f = 0.0;

  double log_d1() const noexcept { return df / f; }
  /// (log f)'' = f''/f - (f'/f)^2
  double log_d2() const noexcept { return d2f / f - (df / f) * (df / f); }
};

/// Point of I x M^n in product coordinates (t, x_1..x_n). For the round sphere
/// fiber the x are hyperspherical angles (v_1..v_n), v_n being the azimuth.
struct AmbientPoint {
  double t = 0.0;
  std::vector<double> x;
};

/// The warped product I x_f M^n with metric dt^2 + f(t)^2 g_M, M flat R^n or the unit sphere S^n.
class WarpedProduct {
 public:
  static constexpr std::size_t kProbeCount = 1024;
  static constexpr double kConditionLimit = 1e12;

  WarpedProduct(Interval interval, Expression warping, FiberModel fiber, int n)
      : interval_(interval), warping_(std::move(warping)), fiber_(fiber), n_(n) {
    if (!(interval_.lo < interval_.hi)) throw ConstructionError("interval requires lo < hi");
    if (n_ < 1) throw ConstructionError("fiber dimension must be at least 1");
    if (warping_.variables() != std::vector<std::string>{"t"})
      throw ConstructionError("warping function must be declared over the single variable t");
    for (double t : probe_grid(kProbeCount)) {
      const double f = warping_.evaluate(std::span<const double>(&t, 1));
      if (!(f > 0.0))
        throw ConstructionError("warping function is not positive at t = " + detail::format_number(t));
    }
  }

  static WarpedProduct make(Interval interval, std::string_view warping, FiberModel fiber, int n) {
    return WarpedProduct(interval, Expression::parse(warping, {"t"}), fiber, n);
  }

  const Interval& interval() const noexcept { return interval_; }
  const Expression& warping() const noexcept { return warping_; }
  FiberModel fiber() const noexcept { return fiber_; }
  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  double k() const noexcept { return fiber_ == FiberModel::RoundSphere ? 1.0 : 0.0; }

  Jet2 warping_jet(double t) const {
    static constexpr std::size_t active[] = {0};
    return warping_.jet(std::span<const double>(&t, 1), active);
  }

  WarpingValues warp(double t) const {
    const Jet2 j = warping_jet(t);
    return {j.value(), j.first(0), j.second(0, 0)};
  }

  /// `count` cell-centred points of the interval; infinite ends are clipped to a
  /// window of width 100 around the finite part.
  std::vector<double> probe_grid(std::size_t count) const {
    double lo = interval_.lo, hi = interval_.hi;
    if (std::isinf(lo) && std::isinf(hi)) {
      lo = -50.0;
      hi = 50.0;
    } else if (std::isinf(lo)) {
      lo = hi - 100.0;
    } else if (std::isinf(hi)) {
      hi = lo + 100.0;
    }
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i)
      ts[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    return ts;
  }

 private:
  Interval interval_;
  Expression warping_;
  FiberModel fiber_;
  int n_;
};

inline void validate_point(const WarpedProduct& w, const AmbientPoint& p) {
  if (p.x.size() != static_cast<std::size_t>(w.n()))
    throw DomainError("ambient point has " + std::to_string(p.x.size()) + " fiber coordinates, expected " +
                      std::to_string(w.n()));
  if (!w.interval().contains(p.t)) throw DomainError("t = " + detail::format_number(p.t) + " is outside the interval");
  if (w.fiber() == FiberModel::RoundSphere) {
    const std::size_t n = p.x.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double hi = i + 1 == n ? 2.0 * std::numbers::pi : std::numbers::pi;
      if (!(p.x[i] > 0.0 && p.x[i] < hi))
        throw DomainError("sphere angle v" + std::to_string(i + 1) + " = " + detail::format_number(p.x[i]) +
                          " is outside the chart");
    }
  }
}

namespace detail {

/// Diagonal of the fiber chart metric as jets in the n+1 ambient coordinates.
inline std::vector<Jet2> fiber_metric_diagonal(const WarpedProduct& w, const AmbientPoint& p) {
  const std::size_t n = static_cast<std::size_t>(w.n());
  const std::size_t dim = n + 1;
  std::vector<Jet2> diag(n, Jet2::constant(1.0, dim));
  if (w.fiber() == FiberModel::RoundSphere) {
    Jet2 weight = Jet2::constant(1.0, dim);
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = weight;
      const Jet2 s = sin(Jet2::variable(p.x[i], i + 1, dim));
      weight = weight * s * s;
    }
  }
  return diag;
}

inline void check_conditioning(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > WarpedProduct::kConditionLimit)
    throw SingularMetric("ambient chart metric is numerically singular (condition number " +
                         format_number(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) + ")");
}

}  // namespace detail

/// Metric and its first and second coordinate derivatives at a point.
struct MetricJet {
  Mat g;                       // g_ab
  std::vector<Mat> dg;         // dg[c](a, b) = d_c g_ab
  std::vector<std::vector<Mat>> d2g;  // d2g[c][d](a, b) = d_c d_d g_ab
};

inline MetricJet ambient_metric_jet(const WarpedProduct& w, const AmbientPoint& p) {
  validate_point(w, p);
  const std::size_t dim = w.dim();
  const Jet2 f = embed(w.warping_jet(p.t), 0, dim);
  const Jet2 f2 = f * f;
  const auto fiber = detail::fiber_metric_diagonal(w, p);

  std::vector<Jet2> diag;
  diag.reserve(dim);
  diag.push_back(Jet2::constant(1.0, dim));
  for (const auto& m : fiber) diag.push_back(f2 * m);

  MetricJet mj;
  mj.g = Mat::Zero(dim, dim);
  mj.dg.assign(dim, Mat::Zero(dim, dim));
  mj.d2g.assign(dim, std::vector<Mat>(dim, Mat::Zero(dim, dim)));
  for (std::size_t a = 0; a < dim; ++a) {
    mj.g(a, a) = diag[a].value();
    for (std::size_t c = 0; c < dim; ++c) {
      mj.dg[c](a, a) = diag[a].first(c);
      for (std::size_t d = 0; d < dim; ++d) mj.d2g[c][d](a, a) = diag[a].second(c, d);
    }
  }
  detail::check_conditioning(mj.g);
  return mj;
}

/// dt^2 + f(t)^2 g_M in product chart components.
inline Mat ambient_metric(const WarpedProduct& w, const AmbientPoint& p) { return ambient_metric_jet(w, p).g; }

/// Gamma^a_{bc} of the Levi-Civita connection, stored densely.
class Christoffels {
 public:
  explicit Christoffels(std::size_t dim = 0) : dim_(dim), data_(dim * dim * dim, 0.0) {}
  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const noexcept { return data_[(a * dim_ + b) * dim_ + c]; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) noexcept { return data_[(a * dim_ + b) * dim_ + c]; }

  /// Gamma(X, Y)^a = Gamma^a_{bc} X^b Y^c
  Vec contract(const Vec& x, const Vec& y) const {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b)
        for (std::size_t c = 0; c < dim_; ++c) out[a] += (*this)(a, b, c) * x[b] * y[c];
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Gamma^a_{bc} = 1/2 g^{ad} (d_b g_dc + d_c g_bd - d_d g_bc) from an arbitrary metric jet.
inline Christoffels christoffels_from_metric(const Mat& g, const std::vector<Mat>& dg) {
  const std::size_t dim = static_cast<std::size_t>(g.rows());
  const Mat ginv = g.inverse();
  Christoffels gamma(dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      for (std::size_t c = b; c < dim; ++c) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) s += ginv(a, d) * (dg[b](d, c) + dg[c](b, d) - dg[d](b, c));
        gamma(a, b, c) = 0.5 * s;
        gamma(a, c, b) = 0.5 * s;
      }
  return gamma;
}

inline Christoffels ambient_christoffels(const WarpedProduct& w, const AmbientPoint& p) {
  const MetricJet mj = ambient_metric_jet(w, p);
  return christoffels_from_metric(mj.g, mj.dg);
}

namespace detail {

/// Warped-product curvature with precomputed metric and warping values; see ambient_curvature.
inline Vec curvature_closed_form(double k, const WarpingValues& wv, const Mat& g, const Vec& x, const Vec& y,
                                 const Vec& z) {
  const double l1 = wv.log_d1(), l2 = wv.log_d2();
  auto ip = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
  auto fiber_part = [](Vec v) {
    v[0] = 0.0;
    return v;
  };
  const Vec xs = fiber_part(x), ys = fiber_part(y), zs = fiber_part(z);
  Vec dt = Vec::Zero(x.size());
  dt[0] = 1.0;
  const double x0 = x[0], y0 = y[0], z0 = z[0];  // <V, d_t> since g_00 = 1 and g_0i = 0

  Vec r = (k / (wv.f * wv.f)) * (ip(xs, zs) * ys - ip(ys, zs) * xs);
  r -= l1 * l1 * (ip(x, z) * y - ip(y, z) * x);
  r += l2 * z0 * (y0 * x - x0 * y);
  r -= l2 * (y0 * ip(x, z) - x0 * ip(y, z)) * dt;
  return -r;
}

}  // namespace detail

/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
///
/// The warped-product closed form below is written in the opposite sign
/// convention (R_XY = nabla_[X,Y] - [nabla_X, nabla_Y]) and negated on return.
/// With this choice e^t over flat R^n has sectional curvature -1 and sin t over
/// S^n has +1.
inline Vec ambient_curvature(const WarpedProduct& w, const AmbientPoint& p, const Vec& x, const Vec& y,
                             const Vec& z) {
  return detail::curvature_closed_form(w.k(), w.warp(p.t), ambient_metric(w, p), x, y, z);
}

/// <R(X,Y)Y,X> / (|X|^2|Y|^2 - <X,Y>^2)
inline double sectional_curvature(const WarpedProduct& w, const AmbientPoint& p, const Vec& x, const Vec& y) {
  const Mat g = ambient_metric(w, p);
  const double area2 = x.dot(g * x) * y.dot(g * y) - std::pow(x.dot(g * y), 2);
  return ambient_curvature(w, p, x, y, y).dot(g * x) / area2;
}

/// `count` cell-centred points strictly inside the interval. Infinite
/// intervals use the window [-5, 5]; half-infinite ones a width-5 window at the finite end.
inline std::vector<double> interior_samples(const Interval& iv, std::size_t count) {
  double lo = iv.lo, hi = iv.hi;
  if (std::isinf(lo) && std::isinf(hi)) {
    lo = -5.0;
    hi = 5.0;
  } else if (std::isinf(hi)) {
    hi = lo + 5.0;
  } else if (std::isinf(lo)) {
    lo = hi - 5.0;
  }
  std::vector<double> ts(count);
  for (std::size_t i = 0; i < count; ++i)
    ts[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
  return ts;
}

struct SpaceFormReport {
  double c = 0.0;
  double max_fiber_residual = 0.0;    // max |((f')^2 - k)/f^2 + c|
  double max_radial_residual = 0.0;   // max |f''/f + c|
  double worst_t = 0.0;
  bool passed = false;
};

inline constexpr double kSpaceFormTolerance = 1e-10;

/// Checks ((f')^2 - k)/f^2 = -c = f''/f at every probe.
inline SpaceFormReport check_space_form(const WarpedProduct& w, double c, const std::vector<double>& probes) {
  SpaceFormReport rep;
  rep.c = c;
  double worst = -1.0;
  for (double t : probes) {
    if (!w.interval().contains(t)) throw DomainError("probe t = " + detail::format_number(t) + " is outside the interval");
    const WarpingValues v = w.warp(t);
    const double r1 = std::abs((v.df * v.df - w.k()) / (v.f * v.f) + c);
    const double r2 = std::abs(v.d2f / v.f + c);
    rep.max_fiber_residual = std::max(rep.max_fiber_residual, r1);
    rep.max_radial_residual = std::max(rep.max_radial_residual, r2);
    if (std::max(r1, r2) > worst) {
      worst = std::max(r1, r2);
      rep.worst_t = t;
    }
  }
  rep.passed = rep.max_fiber_residual < kSpaceFormTolerance && rep.max_radial_residual < kSpaceFormTolerance;
  return rep;
}

}  // namespace warpsol

namespace warpsol {

/// The five warped-product models of the simply connected space forms.
struct SpaceFormModel {
  std::string name;
  Interval interval;
  std::string f;
  FiberModel fiber;
  double c;
};

inline std::vector<SpaceFormModel> space_form_models() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {
      {"S^{n+1} minus two points", {0.0, std::numbers::pi}, "sin(t)", FiberModel::RoundSphere, 1.0},
      {"R^{n+1}", {-inf, inf}, "1", FiberModel::FlatEuclidean, 0.0},
      {"R^{n+1} minus the origin", {0.0, inf}, "t", FiberModel::RoundSphere, 0.0},
      {"H^{n+1} (horospherical)", {-inf, inf}, "exp(t)", FiberModel::FlatEuclidean, -1.0},
      {"H^{n+1} minus a point", {0.0, inf}, "sinh(t)", FiberModel::RoundSphere, -1.0},
  };
}

}  // namespace warpsol
