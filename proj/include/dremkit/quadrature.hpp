#pragma once

#include <Eigen/Dense>

namespace dremkit {

/// Running integral C(k) = int_{x_0}^{x_k} f on a uniform grid of step h.
/// Even k use composite Simpson; odd k add the last interval by the
/// three-point rule h/12 (-f_{k-2} + 8 f_{k-1} + 5 f_k), which keeps the
/// fourth-order accuracy of Simpson on every sample. Each row of `f` is
/// integrated independently.
Eigen::MatrixXd cumulative_simpson(const Eigen::MatrixXd& f, double h);

inline Eigen::VectorXd cumulative_simpson(const Eigen::VectorXd& f, double h) {
  return cumulative_simpson(Eigen::MatrixXd(f.transpose()), h).row(0).transpose();
}

}  // namespace dremkit
