#include "dremkit/ftc.hpp"

#include "dremkit/quadrature.hpp"

#include <cmath>

namespace dremkit {

namespace {

void require_ct_scalar(const Trajectory& Delta, const char* who) {
  if (!Delta.is_scalar() || Delta.kind() != SignalKind::Continuous)
    throw std::invalid_argument(std::string(who) + ": continuous-time scalar Delta required");
}

void require_clip(double mu, const char* who) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument(std::string(who) + ": clip threshold must lie in (0, 1)");
}

Index window_steps(const TimeGrid& grid, double delay_window, const char* who) {
  if (!(delay_window > 0.0)) throw std::invalid_argument(std::string(who) + ": delay window must be positive");
  const Index steps = grid.steps_for(delay_window);
  if (steps < 1 || std::abs(static_cast<double>(steps) * grid.step() - delay_window) > 1e-9 * std::max(1.0, delay_window))
    throw std::invalid_argument(std::string(who) + ": delay window must be a whole number of grid steps");
  return steps;
}

Eigen::VectorXd energy_of(const Trajectory& Delta) {
  const Eigen::VectorXd sq = Delta.samples().row(0).transpose().array().square();
  return cumulative_simpson(sq, Delta.grid().step());
}

// int_{t-T_D}^t Delta^2 with Delta = 0 before the first sample.
Eigen::VectorXd window_energy(const Trajectory& Delta, Index steps) {
  const Eigen::VectorXd c = energy_of(Delta);
  Eigen::VectorXd out(c.size());
  for (Index k = 0; k < c.size(); ++k) out(k) = k >= steps ? c(k) - c(k - steps) : c(k);
  return out;
}

Eigen::VectorXd gains_for(const FtcConfig& cfg, Index m) {
  Eigen::VectorXd g;
  if (cfg.gamma.size() == 1) g = Eigen::VectorXd::Constant(m, cfg.gamma(0));
  else if (cfg.gamma.size() == m) g = cfg.gamma;
  else throw std::invalid_argument("FtcConfig: expected 1 or " + std::to_string(m) + " gains");
  for (Index i = 0; i < m; ++i)
    if (!(g(i) > 0.0)) throw std::invalid_argument("FtcConfig: gains must be positive");
  return g;
}

double weight(const Trajectory& w, Index row, Index k) { return w.rows() == 1 ? w.scalar(k) : w.samples()(row, k); }

void require_weight_layout(const Trajectory& theta_hat, const Trajectory& w, const char* who) {
  if (!(theta_hat.grid() == w.grid()) || !w.is_vector() || (w.rows() != 1 && w.rows() != theta_hat.rows()))
    throw std::invalid_argument(std::string(who) + ": weights must be scalar or per-element on the estimate grid");
}

void check_clip_contract(double wc, Index k, const char* who) {
  if (!(wc < 1.0))
    throw NumericalFailure(std::string(who) + ": clipped weight reached 1 at sample " + std::to_string(k));
}

// Shared gating for both variants: outputs the finite-time estimate from the
// first sample where the raw weight drops below mu (and k >= first_allowed).
FtcRun gate(const EstimatorRun& base, Trajectory w, double mu, Index first_allowed, const Trajectory& formula) {
  const Trajectory& est = base.theta_hat;
  const Index m = est.rows();
  Trajectory w_clipped = clip_w(w, mu);
  Trajectory::Storage out = est.samples();
  Trajectory::Storage active = Trajectory::Storage::Zero(m, est.count());
  std::vector<std::optional<double>> t_c(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Index start = est.count();
    for (Index k = first_allowed; k < est.count(); ++k) {
      if (w.samples()(i, k) < mu) {
        start = k;
        break;
      }
    }
    if (start < est.count()) t_c[static_cast<std::size_t>(i)] = est.time(start);
    for (Index k = start; k < est.count(); ++k) {
      out(i, k) = formula.samples()(i, k);
      active(i, k) = 1.0;
    }
  }
  return {std::move(w), std::move(w_clipped), Trajectory(est.grid(), est.kind(), m, 1, std::move(out)),
          Trajectory(est.grid(), est.kind(), m, 1, std::move(active)), std::move(t_c)};
}

}  // namespace

Trajectory update_w(const Trajectory& Delta, double gamma) {
  require_ct_scalar(Delta, "update_w");
  const Eigen::VectorXd w = (-gamma * energy_of(Delta).array()).exp();
  return Trajectory::scalars(Delta.grid(), Delta.kind(), w);
}

Trajectory clip_w(const Trajectory& w, double mu) {
  require_clip(mu, "clip_w");
  Trajectory::Storage s = w.samples();
  for (Index k = 0; k < s.size(); ++k) {
    double& v = s.data()[k];
    if (v >= mu) v = mu;
  }
  return Trajectory(w.grid(), w.kind(), w.rows(), w.cols(), std::move(s));
}

Trajectory ftc_estimate(const Trajectory& theta_hat, const Trajectory& w_clipped, const Eigen::VectorXd& theta_hat0) {
  require_weight_layout(theta_hat, w_clipped, "ftc_estimate");
  const Index m = theta_hat.rows();
  if (theta_hat0.size() != m) throw std::invalid_argument("ftc_estimate: initial estimate dimension");
  Trajectory::Storage out(m, theta_hat.count());
  for (Index k = 0; k < theta_hat.count(); ++k) {
    for (Index i = 0; i < m; ++i) {
      const double wc = weight(w_clipped, i, k);
      check_clip_contract(wc, k, "ftc_estimate");
      out(i, k) = (theta_hat.samples()(i, k) - wc * theta_hat0(i)) / (1.0 - wc);
    }
  }
  return Trajectory(theta_hat.grid(), theta_hat.kind(), m, 1, std::move(out));
}

Trajectory update_w_delayed(const Trajectory& Delta, double gamma, double delay_window) {
  require_ct_scalar(Delta, "update_w_delayed");
  const Index steps = window_steps(Delta.grid(), delay_window, "update_w_delayed");
  const Eigen::VectorXd w = (-gamma * window_energy(Delta, steps).array()).exp();
  return Trajectory::scalars(Delta.grid(), Delta.kind(), w);
}

Trajectory ftc_alert_estimate(const Trajectory& theta_hat, const Trajectory& w_delayed_clipped, double delay_window,
                              bool use_delayed_snapshot) {
  require_weight_layout(theta_hat, w_delayed_clipped, "ftc_alert_estimate");
  const Index steps = window_steps(theta_hat.grid(), delay_window, "ftc_alert_estimate");
  const Index m = theta_hat.rows();
  Trajectory::Storage out(m, theta_hat.count());
  for (Index k = 0; k < theta_hat.count(); ++k) {
    const Index past = use_delayed_snapshot ? std::max<Index>(0, k - steps) : 0;
    for (Index i = 0; i < m; ++i) {
      const double wc = weight(w_delayed_clipped, i, k);
      check_clip_contract(wc, k, "ftc_alert_estimate");
      out(i, k) = (theta_hat.samples()(i, k) - wc * theta_hat.samples()(i, past)) / (1.0 - wc);
    }
  }
  return Trajectory(theta_hat.grid(), theta_hat.kind(), m, 1, std::move(out));
}

std::optional<double> interval_excitation_time(const Trajectory& Delta, double gamma, double mu) {
  require_ct_scalar(Delta, "interval_excitation_time");
  require_clip(mu, "interval_excitation_time");
  const Eigen::VectorXd c = energy_of(Delta);
  const double target = -std::log(mu);
  for (Index k = 0; k < c.size(); ++k)
    if (gamma * c(k) >= target) return Delta.time(k);
  return std::nullopt;
}

std::optional<double> interval_excitation_time_delayed(const Trajectory& Delta, double gamma, double mu,
                                                       double delay_window) {
  require_ct_scalar(Delta, "interval_excitation_time_delayed");
  require_clip(mu, "interval_excitation_time_delayed");
  const Index steps = window_steps(Delta.grid(), delay_window, "interval_excitation_time_delayed");
  const Eigen::VectorXd e = window_energy(Delta, steps);
  const double target = -std::log(mu);
  for (Index k = steps; k < e.size(); ++k)
    if (gamma * e(k) >= target) return Delta.time(k);
  return std::nullopt;
}

FtcRun run_ftc(const EstimatorRun& base, const FtcConfig& cfg) {
  require_clip(cfg.clip_threshold, "run_ftc");
  const Trajectory& est = base.theta_hat;
  const Index m = est.rows();
  const Eigen::VectorXd gamma = gains_for(cfg, m);
  Trajectory::Storage w(m, est.count());
  for (Index i = 0; i < m; ++i) w.row(i) = update_w(base.diagnostic, gamma(i)).samples();
  Trajectory weights(est.grid(), est.kind(), m, 1, std::move(w));
  const Trajectory formula = ftc_estimate(est, clip_w(weights, cfg.clip_threshold), est.vector(0));
  return gate(base, std::move(weights), cfg.clip_threshold, 0, formula);
}

FtcRun run_ftc_alert(const EstimatorRun& base, const FtcConfig& cfg) {
  require_clip(cfg.clip_threshold, "run_ftc_alert");
  const Trajectory& est = base.theta_hat;
  const Index m = est.rows();
  const Eigen::VectorXd gamma = gains_for(cfg, m);
  const Index steps = window_steps(est.grid(), cfg.delay_window, "run_ftc_alert");
  Trajectory::Storage w(m, est.count());
  for (Index i = 0; i < m; ++i) w.row(i) = update_w_delayed(base.diagnostic, gamma(i), cfg.delay_window).samples();
  Trajectory weights(est.grid(), est.kind(), m, 1, std::move(w));
  const Trajectory formula = ftc_alert_estimate(est, clip_w(weights, cfg.clip_threshold), cfg.delay_window,
                                                cfg.use_delayed_snapshot);
  return gate(base, std::move(weights), cfg.clip_threshold, steps, formula);
}

}  // namespace dremkit
