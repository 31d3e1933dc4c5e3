#pragma once

#include <Eigen/Dense>

namespace warpsol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Largest |eigenvalue| of the symmetric matrix `m`.
inline double spectral_norm_symmetric(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace warpsol
