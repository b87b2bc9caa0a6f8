#pragma once

#include "dremkit/mixing.hpp"

#include <optional>

namespace dremkit {

/// Gains and initial estimate for the gradient-family estimators. A single
/// gain is broadcast to every channel of a DREM estimator.
struct GradientConfig {
  Eigen::VectorXd gamma;       // one gain, or one per parameter (DREM)
  Eigen::VectorXd theta_hat0;  // empty means zero

  static GradientConfig uniform(double gamma, Eigen::VectorXd theta_hat0 = {}) {
    return {Eigen::VectorXd::Constant(1, gamma), std::move(theta_hat0)};
  }
};

/// Estimate trajectory plus a per-sample diagnostic (|phi|^2 for vector
/// gradients, Delta for DREM). Discrete-time runs store the estimate after
/// processing sample k; the initial estimate precedes the first sample.
struct EstimatorRun {
  Trajectory theta_hat;
  Trajectory diagnostic;
  std::optional<Trajectory> theta_tilde;
};

/// Fills run.theta_tilde = theta_hat - theta (theta sampled on the same grid).
void attach_truth(EstimatorRun& run, const Trajectory& theta);

/// theta_hat' = gamma phi (y - phi^T theta_hat), RK4 on the grid of y.
EstimatorRun ct_gradient(const Trajectory& y, const Trajectory& phi, const GradientConfig& cfg);

/// theta_hat(k) = theta_hat(k-1) + phi(k) / (gamma + |phi(k)|^2) (y(k) - phi(k)^T theta_hat(k-1)).
EstimatorRun dt_gradient(const Trajectory& y, const Trajectory& phi, const GradientConfig& cfg);

/// theta_hat_i' = gamma_i Delta (calY_i - Delta theta_hat_i), one RK4 per element.
EstimatorRun drem_ct(const MixedRegression& mixed, const GradientConfig& cfg);

/// theta_hat_i(k) = theta_hat_i(k-1) + Delta(k) / (gamma_i + Delta(k)^2) (calY_i(k) - Delta(k) theta_hat_i(k-1)).
EstimatorRun drem_dt(const MixedRegression& mixed, const GradientConfig& cfg);

/// exp(-gamma int_0^t Delta^2) theta_tilde0, with the integral by cumulative Simpson.
Trajectory closed_form_error_ct(const Trajectory& Delta, double gamma, double theta_tilde0);

/// Running product theta_tilde(k) = theta_tilde(k-1) / (1 + Delta(k)^2 / gamma)
/// starting from theta_tilde0, matching drem_dt's sample convention.
Trajectory closed_form_error_dt(const Trajectory& Delta, double gamma, double theta_tilde0);

/// First grid time after which |err| stays <= tol for the rest of the
/// horizon, considering only samples at or after `from`. Empty when the
/// last sample violates the tolerance.
std::optional<double> settling_time(const Trajectory& err, double tol, double from = 0.0);

}  // namespace dremkit
