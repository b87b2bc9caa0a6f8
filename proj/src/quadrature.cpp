#include "dremkit/quadrature.hpp"

namespace dremkit {

Eigen::MatrixXd cumulative_simpson(const Eigen::MatrixXd& f, double h) {
  const Eigen::Index n = f.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(f.rows(), n);
  if (n < 2) return c;
  if (n == 2) {
    c.col(1) = 0.5 * h * (f.col(0) + f.col(1));
    return c;
  }
  c.col(1) = (h / 12.0) * (5.0 * f.col(0) + 8.0 * f.col(1) - f.col(2));
  for (Eigen::Index k = 2; k < n; ++k) {
    if (k % 2 == 0) {
      c.col(k) = c.col(k - 2) + (h / 3.0) * (f.col(k - 2) + 4.0 * f.col(k - 1) + f.col(k));
    } else {
      c.col(k) = c.col(k - 1) + (h / 12.0) * (-f.col(k - 2) + 8.0 * f.col(k - 1) + 5.0 * f.col(k));
    }
  }
  return c;
}

}  // namespace dremkit
