#include "dremkit/scenarios.hpp"

#include "dremkit/rk4.hpp"

#include <numbers>

namespace dremkit {

namespace {

EstimatorSeries make_series(std::string name, const Trajectory& theta_hat, const Trajectory& theta, double tol,
                            std::vector<AuxColumn> aux) {
  Trajectory err = theta_hat - theta;
  const Index m = err.rows();
  std::vector<std::optional<double>> settle;
  for (Index i = 0; i < m; ++i) settle.push_back(settling_time(err.component(i), tol));
  Eigen::VectorXd final_error = err.vector(err.count() - 1);
  return {std::move(name), theta_hat, std::move(err), std::move(aux), std::move(settle), std::move(final_error)};
}

}  // namespace

const EstimatorSeries& ScenarioResult::at(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw std::out_of_range("ScenarioResult: no series named " + name);
}

PlantRun simulate_plant(const PlantSpec& plant, const TimeGrid& grid) {
  const auto rhs = [&](double t, double y) { return plant.a * y + plant.b * plant.input(t); };
  Eigen::VectorXd u(grid.count());
  Eigen::VectorXd y(grid.count());
  double state = plant.y0;
  for (Index k = 0; k < grid.count(); ++k) {
    const double t = grid.time(k);
    u(k) = plant.input(t);
    y(k) = state;
    if (k + 1 < grid.count()) state = detail::rk4_step(rhs, t, state, grid.step());
  }
  return {Trajectory::scalars(grid, SignalKind::Continuous, u), Trajectory::scalars(grid, SignalKind::Continuous, y)};
}

Regressor build_regressor(const RegressorSpec& spec, const PlantSpec& plant, const PlantRun& run) {
  if (!(spec.lambda > 0.0)) throw std::invalid_argument("build_regressor: lambda must be positive");
  const auto filter = [&](double x0) {
    return LtvChannel(SignalKind::Continuous, 1, Eigen::MatrixXd(Eigen::MatrixXd::Constant(1, 1, -spec.lambda)),
                      Eigen::VectorXd(Eigen::VectorXd::Ones(1)), Eigen::VectorXd(Eigen::VectorXd::Ones(1)), 0.0,
                      0.0, 0.0, Eigen::VectorXd::Constant(1, x0));
  };
  const Trajectory fy = apply_channel_ct(filter(spec.y_filter0), run.y);
  const Trajectory fu = apply_channel_ct(filter(spec.u_filter0), run.u);
  Trajectory::Storage phi(2, run.y.count());
  phi.row(0) = fy.samples();
  phi.row(1) = fu.samples();
  return {Trajectory(run.y.grid(), SignalKind::Continuous, 2, 1, std::move(phi)),
          Eigen::Vector2d(plant.a + spec.lambda, plant.b)};
}

IdentificationConfig IdentificationConfig::preset(InputKind input) {
  IdentificationConfig cfg;
  cfg.plant.a = -0.4;
  cfg.plant.b = 0.4;
  cfg.plant.input = input == InputKind::Rich ? InputSignal::sinusoid(15.0, 2.5, 1.0) : InputSignal::constant(15.0);
  cfg.regressor.lambda = 5.0;
  const auto first_order = [](double pole, double gain) {
    return LtvChannel::lti(SignalKind::Continuous, Eigen::MatrixXd::Constant(1, 1, -pole),
                           Eigen::VectorXd::Constant(1, gain), Eigen::VectorXd::Ones(1));
  };
  cfg.bank = {first_order(1.0, 1.0), first_order(2.0, 2.0)};
  return cfg;
}

ScenarioResult run_identification_scenario(const IdentificationConfig& cfg) {
  const PlantRun plant = simulate_plant(cfg.plant, cfg.grid);
  const Regressor reg = build_regressor(cfg.regressor, cfg.plant, plant);
  const Index m = reg.theta_true.size();
  const Trajectory theta = sample_schedule(ThetaSchedule::constant(reg.theta_true), cfg.grid);
  const Eigen::VectorXd theta0 = cfg.theta_hat0.size() ? cfg.theta_hat0 : Eigen::VectorXd::Zero(m);

  ScenarioResult result{cfg.plant.input.kind == InputSignal::Kind::Sinusoid ? "identification, sinusoidal input"
                                                                            : "identification, constant input",
                        cfg.grid, theta, {}, cfg.tolerance, {}};

  const EstimatorRun grad = ct_gradient(plant.y, reg.phi, GradientConfig::uniform(cfg.gradient_gamma, theta0));
  result.series.push_back(make_series("gradient", grad.theta_hat, theta, cfg.tolerance, {{"phi_norm2", grad.diagnostic}}));

  const GradientConfig drem_cfg{cfg.drem_gamma, theta0};
  const EstimatorRun plain = drem_ct(mix(extend(cfg.bank, plant.y, reg.phi, &result.warnings)), drem_cfg);
  result.series.push_back(make_series("drem_d0", plain.theta_hat, theta, cfg.tolerance, {{"Delta", plain.diagnostic}}));

  if (cfg.with_feedforward) {
    const EstimatorRun boosted =
        drem_ct(mix(extend_with_feedforward(cfg.bank, plant.y, reg.phi, &result.warnings)), drem_cfg);
    result.series.push_back(
        make_series("drem_dN", boosted.theta_hat, theta, cfg.tolerance, {{"Delta", boosted.diagnostic}}));
  }
  return result;
}

FtcScenarioConfig FtcScenarioConfig::preset(DeltaKind delta) {
  FtcScenarioConfig cfg;
  cfg.delta = delta;
  return cfg;
}

Trajectory ftc_delta(DeltaKind kind, const TimeGrid& grid) {
  return Trajectory::generate(grid, SignalKind::Continuous, 1, 1, [kind](Index, double t) {
    return kind == DeltaKind::Sinusoid ? std::sin(2.0 * std::numbers::pi * t) : 1.0 / (t + 1.0);
  });
}

ScenarioResult run_ftc_scenario(const FtcScenarioConfig& cfg) {
  if (cfg.theta.dimension() != 1) throw std::invalid_argument("run_ftc_scenario: scalar parameter schedule required");
  const Trajectory Delta = ftc_delta(cfg.delta, cfg.grid);
  const Trajectory theta = sample_schedule(cfg.theta, cfg.grid);
  Eigen::VectorXd y(cfg.grid.count());
  for (Index k = 0; k < y.size(); ++k) y(k) = Delta.scalar(k) * theta.scalar(k);
  const MixedRegression mixed{Trajectory::scalars(cfg.grid, SignalKind::Continuous, y), Delta};

  const EstimatorRun grad = drem_ct(mixed, GradientConfig::uniform(cfg.gamma, Eigen::VectorXd::Constant(1, cfg.theta_hat0)));
  const FtcConfig ftc_cfg{cfg.clip_threshold, Eigen::VectorXd::Constant(1, cfg.gamma), cfg.delay_window,
                          cfg.use_delayed_snapshot};
  const FtcRun plain = run_ftc(grad, ftc_cfg);
  const FtcRun alert = run_ftc_alert(grad, ftc_cfg);

  ScenarioResult result{cfg.delta == DeltaKind::Sinusoid ? "finite-time tracking, Delta = sin(2 pi t)"
                                                         : "finite-time tracking, Delta = 1/(t+1)",
                        cfg.grid, theta, {}, cfg.tolerance, {}};
  result.series.push_back(make_series("gradient", grad.theta_hat, theta, cfg.tolerance, {{"Delta", Delta}}));
  result.series.push_back(make_series(
      "ftc", plain.theta_ftc, theta, cfg.tolerance,
      {{"Delta", Delta}, {"w", plain.w}, {"w_c", plain.w_clipped}, {"active", plain.active}}));
  result.series.push_back(make_series(
      "ftc_d", alert.theta_ftc, theta, cfg.tolerance,
      {{"Delta", Delta}, {"w_D", alert.w}, {"w_D_c", alert.w_clipped}, {"active", alert.active}}));
  return result;
}

}  // namespace dremkit
