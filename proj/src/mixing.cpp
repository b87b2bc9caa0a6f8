#include "dremkit/mixing.hpp"

namespace dremkit {

MixedRegression mix(const Trajectory& Y, const Trajectory& Phi) {
  if (!Y.is_vector() || Phi.rows() != Phi.cols() || Phi.rows() != Y.rows())
    throw std::invalid_argument("mix: Y must be an m-vector and Phi an m x m trajectory");
  if (!(Y.grid() == Phi.grid()) || Y.kind() != Phi.kind())
    throw std::invalid_argument("mix: Y and Phi must share one grid and kind");

  const Index m = Y.rows();
  Trajectory::Storage calY(m, Y.count());
  Eigen::VectorXd Delta(Y.count());
  for (Index k = 0; k < Y.count(); ++k) {
    const Eigen::MatrixXd P = Phi.matrix(k);
    calY.col(k) = adjugate(P) * Y.vector(k);
    Delta(k) = determinant(P);
  }
  return {Trajectory(Y.grid(), Y.kind(), m, 1, std::move(calY)), Trajectory::scalars(Y.grid(), Y.kind(), Delta)};
}

ExtendedRegression extend_with_feedforward(const OperatorBank& bank0, const Trajectory& y, const Trajectory& phi,
                                           Warnings* warnings) {
  for (std::size_t i = 0; i < bank0.size(); ++i) {
    if (!bank0[i].has_zero_feedthrough())
      throw std::invalid_argument("extend_with_feedforward: channel " + std::to_string(i + 1) +
                                  " already has a feedthrough term");
  }
  const ExtendedRegression base = extend(bank0, y, phi, warnings);
  const Index m = phi.rows();
  Trajectory::Storage Y = base.Y.samples();
  Trajectory::Storage Phi = base.Phi.samples();
  for (Index k = 0; k < phi.count(); ++k) {
    const Eigen::VectorXd p = phi.vector(k);
    const Eigen::VectorXd d = feedforward_gain(base.Phi.matrix(k), p);
    Eigen::Map<Eigen::MatrixXd> P(Phi.col(k).data(), m, m);
    P += d * p.transpose();
    Y.col(k) += d * y.scalar(k);
  }
  return {Trajectory(y.grid(), y.kind(), m, 1, std::move(Y)), Trajectory(y.grid(), y.kind(), m, m, std::move(Phi))};
}

}  // namespace dremkit
