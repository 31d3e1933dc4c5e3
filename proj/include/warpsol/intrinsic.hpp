#pragma once

#include <span>

#include "warpsol/ambient.hpp"
#include "warpsol/hypersurface.hpp"
#include "warpsol/linalg.hpp"

namespace warpsol {

/// Intrinsic curvature of the induced metric at one point.
struct CurvaturePackage {
  double scal_gauss = 0.0;       // trace of the Gauss-equation Ricci tensor
  double scal_formula = 0.0;     // warped-product closed form for constant fiber curvature
  Mat ric;                       // Ric(E_i, E_j) in the chart frame
  double ric_gradh = 0.0;        // Ric(grad h, grad h)
  double traceless_norm2 = 0.0;  // |A|^2 - n H^2
};

namespace detail {

/// Columns form a g-orthonormal frame of the tangent space, in ambient components.
inline Mat orthonormal_tangent_frame(const LocalFrame& lf) {
  Eigen::LLT<Mat> llt(lf.g);
  const Mat lower = llt.matrixL();
  // E L^{-T}: (L^{-1} E^T)^T
  return lower.triangularView<Eigen::Lower>().solve(lf.frame.transpose()).transpose();
}

/// Ric(X, Z) = sum_a <Rbar(e_a, X) Z, e_a> + n H <A X, Z> - <A X, A Z>, in the chart frame.
inline Mat gauss_ricci(const LocalFrame& lf, double k) {
  const Eigen::Index n = lf.g.rows();
  const Mat e = orthonormal_tangent_frame(lf);
  const Mat& G = lf.metric.g;
  const double nH = lf.shape.trace();
  Mat ric = nH * lf.second_form - lf.second_form * lf.ginv * lf.second_form;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) {
        const Vec r = curvature_closed_form(k, lf.warp, G, e.col(a), lf.frame.col(i), lf.frame.col(j));
        s += r.dot(G * e.col(a));
      }
      ric(i, j) += s;
    }
  return ric;
}

inline double scalar_formula(const LocalFrame& lf, double k, double grad_h_norm2) {
  const double n = static_cast<double>(lf.g.rows());
  const WarpingValues& w = lf.warp;
  const double H = lf.shape.trace() / n;
  const double a2 = (lf.shape * lf.shape).trace();
  const double l1 = w.log_d1(), l2 = w.log_d2();
  return k / (w.f * w.f) * (n - 1.0) * (n - 2.0 * grad_h_norm2) + n * l1 * l1 * (grad_h_norm2 - (n - 1.0)) -
         (n - 2.0) * l2 * grad_h_norm2 - n * (w.d2f / w.f) * grad_h_norm2 + n * n * H * H - a2;
}

inline CurvaturePackage curvature_package(const LocalFrame& lf, double k) {
  const ShapeData sd = to_shape_data(lf);
  CurvaturePackage cp;
  cp.ric = gauss_ricci(lf, k);
  cp.scal_gauss = (lf.ginv * cp.ric).trace();
  cp.scal_formula = scalar_formula(lf, k, sd.grad_h_norm2);
  cp.ric_gradh = sd.grad_h.dot(cp.ric * sd.grad_h);
  const double n = static_cast<double>(lf.g.rows());
  cp.traceless_norm2 = (lf.shape * lf.shape).trace() - n * sd.H * sd.H;
  return cp;
}

}  // namespace detail

inline CurvaturePackage curvature_package(const Immersion& imm, std::span<const double> p) {
  return detail::curvature_package(detail::local_frame(imm, p), imm.ambient().k());
}

/// Ric(grad h, grad h) assembled directly from the ambient curvature along grad h
/// and the shape operator, without forming the Ricci matrix.
inline double ricci_gradh_extrinsic(const Immersion& imm, std::span<const double> p) {
  const detail::LocalFrame lf = detail::local_frame(imm, p);
  const ShapeData sd = detail::to_shape_data(lf);
  const Mat e = detail::orthonormal_tangent_frame(lf);
  const Mat& G = lf.metric.g;
  const Vec x = lf.frame * sd.grad_h;
  double s = 0.0;
  for (Eigen::Index a = 0; a < e.cols(); ++a)
    s += detail::curvature_closed_form(imm.ambient().k(), lf.warp, G, e.col(a), x, x).dot(G * e.col(a));
  const double n = static_cast<double>(lf.g.rows());
  const Vec ax = lf.shape * sd.grad_h;
  return s + n * sd.H * sd.grad_h.dot(lf.second_form * sd.grad_h) - ax.dot(lf.g * ax);
}

}  // namespace warpsol
