#pragma once

#include "dremkit/estimators.hpp"

namespace dremkit {

/// Raised when a numerical contract is violated at run time (for example
/// a clipped weight reaching 1).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FtcConfig {
  double clip_threshold = 0.98;      // mu in (0, 1)
  Eigen::VectorXd gamma;             // must equal the DREM gains; one value is broadcast
  double delay_window = 0.2;         // T_D in seconds, alert variant
  bool use_delayed_snapshot = true;  // alert variant: theta_hat(t - T_D) instead of theta_hat(0)
};

/// Per-element finite-time pipeline output. `w` holds w_i (or w_i^D for
/// the alert variant) as an m-vector trajectory; before activation the
/// estimate equals the underlying DREM estimate and `active` is 0.
struct FtcRun {
  Trajectory w;
  Trajectory w_clipped;
  Trajectory theta_ftc;
  Trajectory active;
  std::vector<std::optional<double>> t_c;
};

/// w(t) = exp(-gamma int_0^t Delta^2), the solution of w' = -gamma Delta^2 w, w(0) = 1.
Trajectory update_w(const Trajectory& Delta, double gamma);

/// w^c = mu where w >= mu, w elsewhere.
Trajectory clip_w(const Trajectory& w, double mu);

/// [theta_hat(t) - w^c(t) theta_hat(0)] / (1 - w^c(t)). `w_clipped` is a
/// scalar trajectory (shared by every element) or one row per element.
Trajectory ftc_estimate(const Trajectory& theta_hat, const Trajectory& w_clipped, const Eigen::VectorXd& theta_hat0);

/// w^D(t) = exp(-gamma int_{t-T_D}^t Delta^2), Delta taken as zero before the start.
Trajectory update_w_delayed(const Trajectory& Delta, double gamma, double delay_window);

/// [theta_hat(t) - w^D,c(t) theta_hat(t - T_D)] / (1 - w^D,c(t)), with
/// theta_hat(t - T_D) = theta_hat(0) for t < T_D. With
/// `use_delayed_snapshot` false theta_hat(0) is used at every t.
Trajectory ftc_alert_estimate(const Trajectory& theta_hat, const Trajectory& w_delayed_clipped, double delay_window,
                              bool use_delayed_snapshot = true);

/// First grid time with gamma int_0^t Delta^2 >= -ln(mu).
std::optional<double> interval_excitation_time(const Trajectory& Delta, double gamma, double mu);

/// First grid time t >= T_D with gamma int_{t-T_D}^t Delta^2 >= -ln(mu).
std::optional<double> interval_excitation_time_delayed(const Trajectory& Delta, double gamma, double mu,
                                                       double delay_window);

/// Finite-time estimate built on a DREM run (`base.diagnostic` is Delta).
FtcRun run_ftc(const EstimatorRun& base, const FtcConfig& cfg);

/// Alert finite-time estimate with the delayed window.
FtcRun run_ftc_alert(const EstimatorRun& base, const FtcConfig& cfg);

}  // namespace dremkit
