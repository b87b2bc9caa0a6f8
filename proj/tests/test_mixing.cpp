#include "doctest.h"
#include "oracles.hpp"

#include "dremkit/mixing.hpp"

using namespace dremkit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("adjugate small cases") {
  CHECK(adjugate(MatrixXd::Identity(3, 3)) == MatrixXd::Identity(3, 3));
  const MatrixXd M = (MatrixXd(2, 2) << 1, 2, 3, 4).finished();
  CHECK(adjugate(M) == (MatrixXd(2, 2) << 4, -2, -3, 1).finished());
  CHECK(adjugate(MatrixXd::Constant(1, 1, 7.0))(0, 0) == 1.0);
  CHECK(determinant(M) == -2.0);
  const Eigen::Matrix3d fixed = Eigen::Matrix3d::Identity() * 2.0;
  CHECK(adjugate(fixed) == Eigen::Matrix3d::Identity() * 4.0);
}

TEST_CASE("adjugate and determinant agree with the cofactor oracle") {
  std::mt19937_64 rng(11);
  for (Index m = 1; m <= 6; ++m) {
    for (int trial = 0; trial < 50; ++trial) {
      const MatrixXd M = oracle::random_matrix(rng, m, m);
      const MatrixXd adj = adjugate(M);
      const double d = determinant(M);
      CHECK((adj - oracle::adjugate(M)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(d - oracle::det(M)) <= 1e-12);
      const double tol = 1e-9 * (1.0 + std::abs(d));
      CHECK((adj * M - d * MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= tol);
      CHECK((M * adj - d * MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= tol);
    }
  }
}

TEST_CASE("adjugate of singular and rank-deficient matrices") {
  std::mt19937_64 rng(12);
  for (Index m = 2; m <= 5; ++m) {
    for (Index rank = 0; rank < m; ++rank) {
      const MatrixXd M = rank == 0 ? MatrixXd::Zero(m, m)
                                   : MatrixXd(oracle::random_matrix(rng, m, rank) * oracle::random_matrix(rng, rank, m));
      const MatrixXd adj = adjugate(M);
      CHECK((adj - oracle::adjugate(M)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((adj * M).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(determinant(M)) <= 1e-12);
      if (rank < m - 1) CHECK(adj.cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("adjugate scales as c^(m-1)") {
  std::mt19937_64 rng(13);
  for (Index m = 1; m <= 6; ++m) {
    const MatrixXd M = oracle::random_matrix(rng, m, m);
    for (double c : {-2.0, 0.5, 3.0}) {
      const MatrixXd lhs = adjugate(MatrixXd(c * M));
      const MatrixXd rhs = std::pow(c, static_cast<double>(m - 1)) * adjugate(M);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-11 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("mixing decouples an exact extended regression") {
  std::mt19937_64 rng(14);
  const Eigen::Vector3d theta(1.0, -2.0, 0.5);
  const TimeGrid g(0.0, 1.0, 100);
  Trajectory::Storage P = oracle::random_matrix(rng, 9, 100);
  Trajectory::Storage Y(3, 100);
  for (Index k = 0; k < 100; ++k) Y.col(k) = Eigen::Map<const MatrixXd>(P.col(k).data(), 3, 3) * theta;
  const MixedRegression mixed = mix(Trajectory(g, SignalKind::Discrete, 3, 1, Y), Trajectory(g, SignalKind::Discrete, 3, 3, P));
  for (Index k = 0; k < 100; ++k) {
    const double d = mixed.Delta.scalar(k);
    CHECK((mixed.calY.vector(k) - d * theta).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + std::abs(d)));
  }

  const Trajectory one = Trajectory::scalars(g, SignalKind::Discrete, VectorXd::Constant(100, 3.0));
  const Trajectory phi = Trajectory::scalars(g, SignalKind::Discrete, VectorXd::Constant(100, 1.5));
  const MixedRegression scalar = mix(one, phi);
  CHECK(scalar.calY.samples() == one.samples());
  CHECK(scalar.Delta.samples() == phi.samples());

  CHECK_THROWS_AS(mix(one, Trajectory(g, SignalKind::Discrete, 3, 3, P)), std::invalid_argument);
}

TEST_CASE("feedforward gain and the determinant boost") {
  CHECK(feedforward_gain(MatrixXd::Identity(2, 2), VectorXd(Eigen::Vector2d(1, 0))) == VectorXd(Eigen::Vector2d(1, 0)));
  const MatrixXd rank_one = (MatrixXd(2, 2) << 1, 1, 1, 1).finished();
  const VectorXd in_kernel = Eigen::Vector2d(1, 1);  // adj = [[1,-1],[-1,1]] annihilates (1,1)
  CHECK(feedforward_gain(rank_one, in_kernel).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(15);
  for (Index m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixXd Phi0 = oracle::random_matrix(rng, m, m);
      const VectorXd phi = oracle::random_matrix(rng, m, 1);
      const MatrixXd adj = oracle::adjugate(Phi0);
      const VectorXd d = feedforward_gain(Phi0, phi);
      CHECK((d - adj * phi).cwiseAbs().maxCoeff() <= 1e-12);

      // det(Phi0 + d phi^T) = det(Phi0) + phi^T adj(Phi0) d for any d.
      for (const VectorXd& u : {d, VectorXd(oracle::random_matrix(rng, m, 1))}) {
        const double lhs = oracle::det(Phi0 + u * phi.transpose());
        const double rhs = oracle::det(Phi0) + phi.dot(adj * u);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
      }

      // For symmetric Phi0 the boost is |d|^2 and the determinant grows.
      const MatrixXd S = Phi0 + Phi0.transpose();
      const VectorXd ds = feedforward_gain(S, phi);
      const double boosted = oracle::det(S + ds * phi.transpose());
      CHECK(std::abs(boosted - oracle::det(S) - ds.squaredNorm()) <= 1e-9 * (1.0 + std::abs(boosted)));
      CHECK(boosted >= oracle::det(S) - 1e-12);
    }
  }
}

TEST_CASE("feedforward extension keeps Y = Phi theta") {
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 3.0);
  const Trajectory phi = Trajectory::generate(g, SignalKind::Continuous, 2, 1, [](Index, double t) {
    return Eigen::Vector2d(std::sin(t), std::cos(2.0 * t));
  });
  const Eigen::Vector2d theta(1.5, -0.5);
  const Trajectory y = eval_lre(sample_schedule(ThetaSchedule::constant(theta), g), phi);
  const OperatorBank bank{LtvChannel::lti(SignalKind::Continuous, MatrixXd::Constant(1, 1, -1.0), VectorXd::Ones(1), VectorXd::Ones(1)),
                          LtvChannel::lti(SignalKind::Continuous, MatrixXd::Constant(1, 1, -3.0), VectorXd::Ones(1), VectorXd::Ones(1))};
  const ExtendedRegression plain = extend(bank, y, phi);
  const ExtendedRegression ff = extend_with_feedforward(bank, y, phi);
  for (Index k = 0; k < g.count(); k += 11) {
    const MatrixXd Phi0 = plain.Phi.matrix(k);
    const VectorXd d = adjugate(Phi0) * phi.vector(k);
    CHECK((ff.Phi.matrix(k) - (Phi0 + d * phi.vector(k).transpose())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((ff.Y.vector(k) - ff.Phi.matrix(k) * theta).cwiseAbs().maxCoeff() <= 1e-9);
  }
  const OperatorBank direct{LtvChannel::feedthrough(SignalKind::Continuous, 1.0), bank[1]};
  CHECK_THROWS_AS(extend_with_feedforward(direct, y, phi), std::invalid_argument);
}
