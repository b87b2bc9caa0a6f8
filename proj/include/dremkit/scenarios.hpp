#pragma once

#include "dremkit/ftc.hpp"

#include <string>

namespace dremkit {

/// Plant input: u = amplitude sin(frequency t + phase), or a constant level.
struct InputSignal {
  enum class Kind { Sinusoid, Constant };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;
  double level = 0.0;

  static InputSignal sinusoid(double amplitude, double frequency, double phase) {
    return {Kind::Sinusoid, amplitude, frequency, phase, 0.0};
  }
  static InputSignal constant(double level) { return {Kind::Constant, 0.0, 0.0, 0.0, level}; }

  double operator()(double t) const {
    return kind == Kind::Sinusoid ? amplitude * std::sin(frequency * t + phase) : level;
  }
};

/// First-order plant y' = a y + b u.
struct PlantSpec {
  double a = -0.4;
  double b = 0.4;
  double y0 = 0.0;
  InputSignal input = InputSignal::constant(15.0);
};

struct PlantRun {
  Trajectory u;
  Trajectory y;
};

/// RK4 with the input evaluated analytically at the stage times.
PlantRun simulate_plant(const PlantSpec& plant, const TimeGrid& grid);

/// phi = (1/(p + lambda)[y], 1/(p + lambda)[u]), theta = (a + lambda, b).
struct RegressorSpec {
  double lambda = 5.0;
  double y_filter0 = 0.0;
  double u_filter0 = 0.0;
};

struct Regressor {
  Trajectory phi;
  Eigen::VectorXd theta_true;
};

Regressor build_regressor(const RegressorSpec& spec, const PlantSpec& plant, const PlantRun& run);

/// A named scalar column emitted next to an estimate.
struct AuxColumn {
  std::string name;
  Trajectory values;
};

/// One estimator's output within a scenario.
struct EstimatorSeries {
  std::string name;
  Trajectory theta_hat;
  Trajectory theta_tilde;
  std::vector<AuxColumn> aux;
  std::vector<std::optional<double>> convergence_time;  // per element
  Eigen::VectorXd final_error;
};

struct ScenarioResult {
  std::string title;
  TimeGrid grid;
  Trajectory theta;  // true parameter on the grid
  std::vector<EstimatorSeries> series;
  double tolerance;
  Warnings warnings;

  const EstimatorSeries& at(const std::string& name) const;
};

enum class InputKind { Rich, Constant };

/// Comparison of the vector gradient against DREM with and without the
/// adjugate feedforward gain, for a first-order plant.
struct IdentificationConfig {
  TimeGrid grid = TimeGrid::spanning(0.0, 1e-3, 20.0);
  PlantSpec plant;
  RegressorSpec regressor;
  OperatorBank bank;
  double gradient_gamma = 1.0;
  Eigen::VectorXd drem_gamma = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd theta_hat0;  // empty means zero
  bool with_feedforward = true;
  double tolerance = 0.01;

  /// a = -0.4, b = 0.4, lambda = 5, gamma = 1, channels 1/(p+1) and 2/(p+2),
  /// u = 15 sin(2.5 t + 1) (rich) or u = 15 (constant), horizon 20 s.
  static IdentificationConfig preset(InputKind input);
};

ScenarioResult run_identification_scenario(const IdentificationConfig& cfg);
inline ScenarioResult run_identification_scenario(InputKind input) {
  return run_identification_scenario(IdentificationConfig::preset(input));
}

enum class DeltaKind { Sinusoid, Inverse };

/// Scalar regression y = Delta theta(t) tracked by the DREM gradient and
/// the two finite-time estimates.
struct FtcScenarioConfig {
  TimeGrid grid = TimeGrid::spanning(0.0, 1e-3, 40.0);
  DeltaKind delta = DeltaKind::Sinusoid;  // sin(2 pi t) or 1/(t+1)
  ThetaSchedule theta = ThetaSchedule::jump_and_ramp();
  double gamma = 2.0;
  double clip_threshold = 0.98;
  double delay_window = 0.2;
  bool use_delayed_snapshot = true;
  double theta_hat0 = 0.0;
  double tolerance = 1e-3;

  static FtcScenarioConfig preset(DeltaKind delta);
};

ScenarioResult run_ftc_scenario(const FtcScenarioConfig& cfg);
inline ScenarioResult run_ftc_scenario(DeltaKind delta) { return run_ftc_scenario(FtcScenarioConfig::preset(delta)); }

/// Delta(t) for the finite-time study.
Trajectory ftc_delta(DeltaKind kind, const TimeGrid& grid);

}  // namespace dremkit
