#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "warpsol/ambient.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/expr.hpp"
#include "warpsol/jet.hpp"
#include "warpsol/linalg.hpp"

namespace warpsol {

/// Closed box [lo_i, hi_i] of named chart variables.
struct ChartBox {
  std::vector<std::string> names;
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const noexcept { return names.size(); }

  std::vector<double> center() const {
    std::vector<double> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  bool is_interior(std::span<const double> p, double margin) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(p[i] > lo[i] + margin && p[i] < hi[i] - margin)) return false;
    return true;
  }
};

enum class CatalogueTag { Slice, Hyperplane, SphereInEuclidean, Horosphere, Rotational, Custom };

inline std::string_view to_string(CatalogueTag t) {
  switch (t) {
    case CatalogueTag::Slice: return "slice";
    case CatalogueTag::Hyperplane: return "hyperplane";
    case CatalogueTag::SphereInEuclidean: return "sphere";
    case CatalogueTag::Horosphere: return "horosphere";
    case CatalogueTag::Rotational: return "rotational";
    case CatalogueTag::Custom: return "custom";
  }
  return "custom";
}

/// Chart points closer than this to the box boundary are rejected.
inline constexpr double kBoundaryMargin = 1e-6;
/// Minimum Gram determinant of the first fundamental form.
inline constexpr double kGramThreshold = 1e-12;

/// Maps a chart point to the n+1 ambient coordinates as order-2 jets in the chart variables.
using ComponentMap = std::function<std::vector<Jet2>(std::span<const double>)>;

/// psi : box in R^n -> I x_f M^n, together with the orientation of its unit normal.
///
/// The normal is oriented so that theta >= 0 at the chart-box centre; when
/// |theta| < 1e-10 there, the first non-negligible normal component is made positive.
class Immersion {
 public:
  Immersion(WarpedProduct ambient, ChartBox chart, std::vector<Expression> components,
            CatalogueTag tag = CatalogueTag::Custom)
      : ambient_(std::move(ambient)), chart_(std::move(chart)), tag_(tag) {
    if (components.size() != ambient_.dim())
      throw ConstructionError("immersion needs " + std::to_string(ambient_.dim()) + " component expressions");
    for (const auto& c : components)
      if (c.variables() != chart_.names) throw ConstructionError("component expressions must be declared over the chart variables");
    for (const auto& c : components) component_text_.push_back(c.str());
    std::vector<std::size_t> active(chart_.dim());
    std::iota(active.begin(), active.end(), std::size_t{0});
    map_ = [components = std::move(components), active](std::span<const double> p) {
      std::vector<Jet2> out;
      out.reserve(components.size());
      for (const auto& c : components) out.push_back(c.jet(p, active));
      return out;
    };
    finish();
  }

  Immersion(WarpedProduct ambient, ChartBox chart, ComponentMap map, CatalogueTag tag,
            std::vector<std::string> component_text = {})
      : ambient_(std::move(ambient)), chart_(std::move(chart)), tag_(tag), component_text_(std::move(component_text)),
        map_(std::move(map)) {
    finish();
  }

  const WarpedProduct& ambient() const noexcept { return ambient_; }
  const ChartBox& chart() const noexcept { return chart_; }
  CatalogueTag tag() const noexcept { return tag_; }
  int n() const noexcept { return ambient_.n(); }
  double orientation() const noexcept { return orientation_; }
  /// Same map with the opposite unit normal.
  Immersion flipped() const {
    Immersion out = *this;
    out.orientation_ = -orientation_;
    return out;
  }
  const std::vector<std::string>& component_text() const noexcept { return component_text_; }

  std::vector<Jet2> component_jets(std::span<const double> p) const { return map_(p); }

  AmbientPoint map(std::span<const double> p) const {
    const auto jets = map_(p);
    AmbientPoint q;
    q.t = jets[0].value();
    for (std::size_t a = 1; a < jets.size(); ++a) q.x.push_back(jets[a].value());
    return q;
  }

 private:
  void finish();

  WarpedProduct ambient_;
  ChartBox chart_;
  CatalogueTag tag_;
  std::vector<std::string> component_text_;
  ComponentMap map_;
  double orientation_ = 1.0;
};

namespace detail {

/// Everything the extrinsic and intrinsic computations need at one chart point.
struct LocalFrame {
  std::vector<double> chart;
  AmbientPoint q;
  std::vector<Jet2> psi;  // ambient coordinates as jets in the chart variables
  MetricJet metric;
  Christoffels gamma;
  WarpingValues warp;
  Mat frame;  // (n+1) x n, columns d psi / d u_i
  Mat g;
  Mat ginv;
  Vec normal;
  Mat second_form;  // II_ij = <nabla_{E_i} E_j, N>
  Mat shape;        // A = g^{-1} II
};

/// Unit normal in the metric `metric` to the columns of `frame`, fixed so that
/// det[frame | N] > 0 in orthonormalized coordinates.
inline Vec raw_normal(const Mat& metric, const Mat& frame) {
  const Eigen::Index dim = metric.rows();
  Eigen::LLT<Mat> llt(metric);
  const Mat lt = llt.matrixU();  // metric = lt^T lt
  const Mat m = lt * frame;      // tangents in orthonormal coordinates
  Eigen::HouseholderQR<Mat> qr(m);
  const Mat q = qr.householderQ();
  Vec y = q.col(dim - 1);
  Mat full(dim, dim);
  full << m, y;
  if (full.determinant() < 0.0) y = -y;
  return lt.triangularView<Eigen::Upper>().solve(y);
}

inline Vec ambient_vector(const std::vector<Jet2>& psi, std::size_t i) {
  Vec v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t a = 0; a < psi.size(); ++a) v[static_cast<Eigen::Index>(a)] = psi[a].first(i);
  return v;
}

inline Vec second_derivative(const std::vector<Jet2>& psi, std::size_t i, std::size_t j) {
  Vec v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t a = 0; a < psi.size(); ++a) v[static_cast<Eigen::Index>(a)] = psi[a].second(i, j);
  return v;
}

inline LocalFrame frame_without_orientation(const Immersion& imm, std::span<const double> p, bool require_interior) {
  const auto& box = imm.chart();
  if (p.size() != box.dim()) throw DomainError("chart point has the wrong dimension");
  if (require_interior && !box.is_interior(p, kBoundaryMargin))
    throw BoundaryTooClose("chart point is within 1e-6 of the chart box boundary");

  LocalFrame lf;
  lf.chart.assign(p.begin(), p.end());
  lf.psi = imm.component_jets(p);
  lf.q.t = lf.psi[0].value();
  for (std::size_t a = 1; a < lf.psi.size(); ++a) lf.q.x.push_back(lf.psi[a].value());
  lf.metric = ambient_metric_jet(imm.ambient(), lf.q);
  lf.gamma = christoffels_from_metric(lf.metric.g, lf.metric.dg);
  lf.warp = imm.ambient().warp(lf.q.t);

  const std::size_t n = box.dim();
  const Eigen::Index dim = static_cast<Eigen::Index>(lf.psi.size());
  lf.frame.resize(dim, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) lf.frame.col(static_cast<Eigen::Index>(i)) = ambient_vector(lf.psi, i);
  lf.g = lf.frame.transpose() * lf.metric.g * lf.frame;
  lf.g = 0.5 * (lf.g + lf.g.transpose());
  const double gram = lf.g.determinant();
  if (!(gram > kGramThreshold))
    throw DegenerateImmersion("first fundamental form is degenerate (Gram determinant " + format_number(gram) + ")");
  lf.ginv = lf.g.inverse();
  lf.normal = raw_normal(lf.metric.g, lf.frame);
  return lf;
}

inline void finish_frame(LocalFrame& lf, double orientation) {
  lf.normal *= orientation;
  const std::size_t n = static_cast<std::size_t>(lf.g.rows());
  const Vec gn = lf.metric.g * lf.normal;
  lf.second_form.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Vec ei = lf.frame.col(static_cast<Eigen::Index>(i)), ej = lf.frame.col(static_cast<Eigen::Index>(j));
      const Vec acc = second_derivative(lf.psi, i, j) + lf.gamma.contract(ei, ej);
      const double v = gn.dot(acc);
      lf.second_form(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      lf.second_form(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  lf.shape = lf.ginv * lf.second_form;
}

inline LocalFrame local_frame(const Immersion& imm, std::span<const double> p, bool require_interior = true) {
  LocalFrame lf = frame_without_orientation(imm, p, require_interior);
  finish_frame(lf, imm.orientation());
  return lf;
}

}  // namespace detail

inline void Immersion::finish() {
  if (chart_.dim() != static_cast<std::size_t>(ambient_.n()))
    throw ConstructionError("chart dimension must equal the fiber dimension n");
  if (chart_.lo.size() != chart_.dim() || chart_.hi.size() != chart_.dim())
    throw ConstructionError("chart box bounds do not match the variable list");
  for (std::size_t i = 0; i < chart_.dim(); ++i)
    if (!(chart_.lo[i] < chart_.hi[i])) throw ConstructionError("chart box requires lo < hi for " + chart_.names[i]);
  const auto centre = chart_.center();
  const detail::LocalFrame lf = detail::frame_without_orientation(*this, centre, true);
  const double theta = (lf.metric.g * lf.normal)[0];
  if (std::abs(theta) >= 1e-10) {
    orientation_ = theta > 0.0 ? 1.0 : -1.0;
    return;
  }
  for (Eigen::Index a = 0; a < lf.normal.size(); ++a)
    if (std::abs(lf.normal[a]) > 1e-10) {
      orientation_ = lf.normal[a] > 0.0 ? 1.0 : -1.0;
      return;
    }
}

/// Extrinsic data of the hypersurface at one chart point.
struct ShapeData {
  std::vector<double> point;  // chart coordinates
  AmbientPoint ambient_point;
  Mat frame;    // (n+1) x n tangent frame E_i in ambient components
  Mat g;        // first fundamental form
  Vec normal;   // ambient components of N
  Mat shape;    // Weingarten operator A in the chart frame
  double H = 0.0;
  double h = 0.0;
  double theta = 0.0;
  Vec grad_h;   // chart components of grad h
  double grad_h_norm2 = 0.0;
};

namespace detail {

inline ShapeData to_shape_data(const LocalFrame& lf) {
  ShapeData sd;
  sd.point = lf.chart;
  sd.ambient_point = lf.q;
  sd.frame = lf.frame;
  sd.g = lf.g;
  sd.normal = lf.normal;
  sd.shape = lf.shape;
  const double n = static_cast<double>(lf.g.rows());
  sd.H = lf.shape.trace() / n;
  sd.h = lf.q.t;
  sd.theta = (lf.metric.g * lf.normal)[0];
  Vec dh(lf.g.rows());
  for (Eigen::Index i = 0; i < dh.size(); ++i) dh[i] = lf.psi[0].first(static_cast<std::size_t>(i));
  sd.grad_h = lf.ginv * dh;
  sd.grad_h_norm2 = dh.dot(sd.grad_h);
  return sd;
}

}  // namespace detail

inline ShapeData shape_data(const Immersion& imm, std::span<const double> p) {
  return detail::to_shape_data(detail::local_frame(imm, p));
}

inline double mean_curvature(const Immersion& imm, std::span<const double> p) { return shape_data(imm, p).H; }

/// Shape operator from A E_i = -nabla_{E_i} N, with d_i N obtained by
/// differentiating <N, E_j> = 0 and <N, N> = 1. Independent of the
/// second-fundamental-form route used by shape_data.
inline Mat shape_operator_from_normal(const Immersion& imm, std::span<const double> p) {
  const detail::LocalFrame lf = detail::local_frame(imm, p);
  const Eigen::Index n = lf.g.rows(), dim = n + 1;
  const Mat& G = lf.metric.g;
  const Vec& N = lf.normal;

  Mat system(dim, dim);
  system.topRows(n) = lf.frame.transpose() * G;
  system.row(n) = (G * N).transpose();
  Eigen::PartialPivLU<Mat> lu(system);

  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec ei = lf.frame.col(i);
    Mat dG = Mat::Zero(dim, dim);  // d_i of the ambient metric along psi
    for (Eigen::Index c = 0; c < dim; ++c) dG += lf.metric.dg[static_cast<std::size_t>(c)] * ei[c];
    Vec rhs(dim);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec dej = detail::second_derivative(lf.psi, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      rhs[j] = -(N.dot(dG * lf.frame.col(j)) + N.dot(G * dej));
    }
    rhs[n] = -0.5 * N.dot(dG * N);
    const Vec dN = lu.solve(rhs);
    const Vec cov = dN + lf.gamma.contract(ei, N);  // nabla_{E_i} N
    a.col(i) = -lf.ginv * (lf.frame.transpose() * (G * cov));
  }
  return a;
}

/// N -> -N; every quantity odd in N changes sign.
inline ShapeData flip_orientation(ShapeData sd) {
  sd.normal = -sd.normal;
  sd.shape = -sd.shape;
  sd.theta = -sd.theta;
  sd.H = -sd.H;
  return sd;
}

}  // namespace warpsol
