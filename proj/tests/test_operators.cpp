#include "doctest.h"
#include "oracles.hpp"

#include "dremkit/mixing.hpp"
#include "dremkit/operators.hpp"
#include "dremkit/scenarios.hpp"

using namespace dremkit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LtvChannel first_order(SignalKind kind, double A, double b, double c) {
  return LtvChannel::lti(kind, MatrixXd::Constant(1, 1, A), VectorXd::Constant(1, b), VectorXd::Constant(1, c));
}

Trajectory scalar_signal(const TimeGrid& g, SignalKind kind, const std::function<double(double)>& f) {
  return Trajectory::generate(g, kind, 1, 1, [&](Index, double t) { return f(t); });
}

}  // namespace

TEST_CASE("continuous feedthrough and pure delay") {
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 2.0);
  const Trajectory ramp = scalar_signal(g, SignalKind::Continuous, [](double t) { return t; });

  const Trajectory z = apply_channel_ct(LtvChannel::feedthrough(SignalKind::Continuous, 1.0), ramp);
  CHECK((z.samples() - ramp.samples()).cwiseAbs().maxCoeff() == 0.0);

  Warnings warnings;
  const Trajectory d = apply_channel_ct(LtvChannel::pure_delay(SignalKind::Continuous, 1.0, 0.5), ramp, &warnings);
  CHECK(warnings.empty());
  for (Index k = 0; k < g.count(); ++k) {
    const double t = g.time(k);
    CHECK(d.scalar(k) == doctest::Approx(t >= 0.5 - 1e-12 ? t - 0.5 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("off-grid continuous delay is rounded with a warning") {
  const TimeGrid g = TimeGrid::spanning(0.0, 0.1, 1.0);
  const Trajectory u = scalar_signal(g, SignalKind::Continuous, [](double t) { return t; });
  Warnings warnings;
  apply_channel_ct(LtvChannel::pure_delay(SignalKind::Continuous, 1.0, 0.26), u, &warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("first-order step response matches the closed form") {
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 1.0);
  const Trajectory one = scalar_signal(g, SignalKind::Continuous, [](double) { return 1.0; });
  const Trajectory z = apply_channel_ct(first_order(SignalKind::Continuous, -1.0, 1.0, 1.0), one);
  CHECK(std::abs(z.scalar(g.count() - 1) - (1.0 - std::exp(-1.0))) <= 1e-8);
}

TEST_CASE("discrete channels follow their recursions") {
  const TimeGrid g(0.0, 1.0, 4);
  const Trajectory u = Trajectory::scalars(g, SignalKind::Discrete, Eigen::Vector4d(1, 2, 3, 4));
  const Trajectory id = apply_channel_dt(LtvChannel::feedthrough(SignalKind::Discrete, 1.0), u);
  CHECK(id.samples() == u.samples());
  const Trajectory del = apply_channel_dt(LtvChannel::pure_delay(SignalKind::Discrete, 1.0, 2), u);
  CHECK(del.samples() == Eigen::RowVector4d(0, 0, 1, 2));

  const TimeGrid g10(0.0, 1.0, 10);
  const Trajectory ones = scalar_signal(g10, SignalKind::Discrete, [](double) { return 1.0; });
  const Trajectory z = apply_channel_dt(first_order(SignalKind::Discrete, 0.5, 1.0, 1.0), ones);
  for (Index k = 0; k < 10; ++k) {
    double expected = 0.0;
    for (Index j = 0; j < k; ++j) expected += std::pow(0.5, static_cast<double>(k - 1 - j));
    CHECK(z.scalar(k) == doctest::Approx(expected).epsilon(1e-15));
  }
  CHECK(z.scalar(3) == 1.75);
}

TEST_CASE("channel construction is validated") {
  CHECK_THROWS_AS(first_order(SignalKind::Continuous, 0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(first_order(SignalKind::Continuous, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(first_order(SignalKind::Discrete, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(first_order(SignalKind::Discrete, -1.2, 1.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(first_order(SignalKind::Discrete, -0.9, 1.0, 1.0));
  CHECK_THROWS_AS(LtvChannel::lti(SignalKind::Continuous, MatrixXd::Identity(2, 2) * -1.0, VectorXd::Ones(3),
                                  VectorXd::Ones(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(LtvChannel::pure_delay(SignalKind::Discrete, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(LtvChannel::pure_delay(SignalKind::Continuous, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("channels are linear in the input") {
  std::mt19937_64 rng(3);
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-2, 5.0);
  const oracle::SmoothSignal s1(rng, 1), s2(rng, 1);
  const Trajectory u1 = scalar_signal(g, SignalKind::Continuous, [&](double t) { return s1(t)(0); });
  const Trajectory u2 = scalar_signal(g, SignalKind::Continuous, [&](double t) { return s2(t)(0); });
  const double a = 1.7, b = -0.3;
  const LtvChannel ch(SignalKind::Continuous, 2, MatrixXd((MatrixXd(2, 2) << -1.0, 0.5, -0.5, -2.0).finished()),
                      std::function<VectorXd(double)>([](double t) { return VectorXd::Constant(2, 1.0 + 0.5 * std::sin(t)); }),
                      VectorXd(VectorXd::Ones(2)), 0.3, 0.7, 0.25);
  const Trajectory lhs = apply_channel_ct(ch, a * u1 + b * u2);
  const Trajectory rhs = a * apply_channel_ct(ch, u1) + b * apply_channel_ct(ch, u2);
  CHECK((lhs.samples() - rhs.samples()).cwiseAbs().maxCoeff() <= 1e-12);

  const TimeGrid gd(0.0, 1.0, 200);
  const Trajectory d1(gd, SignalKind::Discrete, 1, 1, oracle::random_matrix(rng, 1, 200));
  const Trajectory d2(gd, SignalKind::Discrete, 1, 1, oracle::random_matrix(rng, 1, 200));
  const LtvChannel chd(SignalKind::Discrete, 1, MatrixXd(MatrixXd::Constant(1, 1, 0.8)),
                       VectorXd(VectorXd::Ones(1)), VectorXd(VectorXd::Ones(1)), 0.5, 1.0, 3.0);
  const Trajectory ld = apply_channel_dt(chd, a * d1 + b * d2);
  const Trajectory rd = a * apply_channel_dt(chd, d1) + b * apply_channel_dt(chd, d2);
  CHECK((ld.samples() - rd.samples()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stable channel output stays within its gain bound") {
  std::mt19937_64 rng(4);
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 20.0);
  const Trajectory u(g, SignalKind::Continuous, 1, 1, oracle::random_matrix(rng, 1, g.count()));
  // 2/(p+2) has L1 impulse-response norm 1.
  const Trajectory z = apply_channel_ct(first_order(SignalKind::Continuous, -2.0, 2.0, 1.0), u);
  CHECK(z.samples().cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
}

TEST_CASE("identity bank yields a singular extension") {
  std::mt19937_64 rng(5);
  const TimeGrid g(0.0, 1.0, 20);
  const Trajectory phi(g, SignalKind::Discrete, 2, 1, oracle::random_matrix(rng, 2, 20));
  const Trajectory y = eval_lre(sample_schedule(ThetaSchedule::constant(VectorXd::Ones(2)), g, SignalKind::Discrete), phi);
  const OperatorBank bank{LtvChannel::feedthrough(SignalKind::Discrete, 1.0), LtvChannel::feedthrough(SignalKind::Discrete, 1.0)};
  const ExtendedRegression ext = extend(bank, y, phi);
  for (Index k = 0; k < g.count(); ++k) {
    CHECK(ext.Y.vector(k)(0) == y.scalar(k));
    CHECK(ext.Y.vector(k)(1) == y.scalar(k));
    CHECK(ext.Phi.matrix(k).row(0) == phi.vector(k).transpose());
    CHECK(ext.Phi.matrix(k).row(1) == phi.vector(k).transpose());
  }
  const MixedRegression mixed = mix(ext);
  CHECK(mixed.Delta.samples().cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(extend(OperatorBank{bank[0]}, y, phi), std::invalid_argument);
}

TEST_CASE("extension of the identification regression satisfies Y = Phi theta after transients") {
  IdentificationConfig cfg = IdentificationConfig::preset(InputKind::Rich);
  cfg.grid = TimeGrid::spanning(0.0, 1e-3, 5.0);
  const PlantRun plant = simulate_plant(cfg.plant, cfg.grid);
  const Regressor reg = build_regressor(cfg.regressor, cfg.plant, plant);
  const ExtendedRegression ext = extend(cfg.bank, plant.y, reg.phi);
  double worst = 0.0;
  for (Index k = cfg.grid.nearest_index(2.0); k < cfg.grid.count(); ++k)
    worst = std::max(worst, (ext.Y.vector(k) - ext.Phi.matrix(k) * reg.theta_true).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-3);
}

TEST_CASE("sliding window extension") {
  const TimeGrid g(0.0, 1.0, 6);
  const Trajectory phi = Trajectory::generate(g, SignalKind::Discrete, 1, 1, [](Index k, double) { return k + 1.0; });
  const Trajectory y = phi;
  const ExtendedRegression ext = sliding_window_extend(y, phi, 2);
  CHECK(ext.Phi.scalar(0) == 0.0);
  CHECK(ext.Phi.scalar(1) == 1.0);
  CHECK(ext.Phi.scalar(2) == 5.0);
  CHECK(ext.Phi.scalar(5) == 16.0 + 25.0);

  std::mt19937_64 rng(6);
  const TimeGrid g2(0.0, 1.0, 500);
  const Trajectory phi2(g2, SignalKind::Discrete, 2, 1, oracle::random_matrix(rng, 2, 500));
  const Trajectory y2(g2, SignalKind::Discrete, 1, 1, oracle::random_matrix(rng, 1, 500));
  CHECK_THROWS_AS(sliding_window_extend(y2, phi2, 1), std::invalid_argument);
  const ExtendedRegression e3 = sliding_window_extend(y2, phi2, 3);
  for (Index k = 0; k < g2.count(); ++k) {
    Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
    Eigen::Vector2d Y = Eigen::Vector2d::Zero();
    for (Index j = 1; j <= 3; ++j) {
      if (k - j < 0) continue;
      P += phi2.vector(k - j) * phi2.vector(k - j).transpose();
      Y += phi2.vector(k - j) * y2.scalar(k - j);
    }
    REQUIRE(e3.Phi.matrix(k) == P);
    REQUIRE(e3.Y.vector(k) == Y);
  }

  const ExtendedRegression viaBank = extend(sliding_window_bank(phi2, 3), y2, phi2);
  CHECK(viaBank.Phi.samples() == e3.Phi.samples());
  CHECK(viaBank.Y.samples() == e3.Y.samples());
}

TEST_CASE("Kreisselmeier extension closed forms") {
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 1.0);
  const double a = 1.0;
  const Trajectory zero2(g, SignalKind::Continuous, 2, 1, Trajectory::Storage::Zero(2, g.count()));
  const Trajectory zero1(g, SignalKind::Continuous, 1, 1, Trajectory::Storage::Zero(1, g.count()));
  const MatrixXd Omega0 = (MatrixXd(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
  const KreOutput decay = kre_ct({a, Omega0, VectorXd()}, zero1, zero2);
  CHECK((decay.Omega.matrix(g.count() - 1) - std::exp(-a) * Omega0).cwiseAbs().maxCoeff() <= 1e-10);

  const Eigen::Vector2d c(0.8, -1.3);
  const Trajectory phi = Trajectory::generate(g, SignalKind::Continuous, 2, 1, [&](Index, double) { return VectorXd(c); });
  const Trajectory y = eval_lre(sample_schedule(ThetaSchedule::constant(Eigen::Vector2d(1, 2)), g), phi);
  const KreOutput out = kre_ct({a, MatrixXd(), VectorXd()}, y, phi);
  const MatrixXd expected = (1.0 - std::exp(-a)) / a * c * c.transpose();
  CHECK((out.Omega.matrix(g.count() - 1) - expected).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK_THROWS_AS(kre_ct({0.0, MatrixXd(), VectorXd()}, y, phi), std::invalid_argument);
}

TEST_CASE("Kreisselmeier extension equals the corresponding DREM bank") {
  std::mt19937_64 rng(7);
  const TimeGrid g = TimeGrid::spanning(0.0, 1e-3, 5.0);
  const oracle::SmoothSignal s(rng, 2);
  const Trajectory phi = Trajectory::generate(g, SignalKind::Continuous, 2, 1, [&](Index, double t) { return s(t); });
  const Trajectory y = eval_lre(sample_schedule(ThetaSchedule::constant(Eigen::Vector2d(-1, 3)), g), phi);
  const KreOutput kre = kre_ct({1.0, MatrixXd(), VectorXd()}, y, phi);
  const ExtendedRegression ext = extend(kre_as_drem_bank(phi, 1.0), y, phi);
  CHECK((kre.Omega.samples() - ext.Phi.samples()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((kre.Z.samples() - ext.Y.samples()).cwiseAbs().maxCoeff() <= 1e-9);

  const Trajectory zero = 0.0 * phi;
  const ExtendedRegression z = extend(kre_as_drem_bank(zero, 1.0), 0.0 * y, zero);
  CHECK(z.Phi.samples().cwiseAbs().maxCoeff() == 0.0);
}
