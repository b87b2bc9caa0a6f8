#include "dremkit/estimators.hpp"

#include "dremkit/quadrature.hpp"
#include "dremkit/rk4.hpp"

namespace dremkit {

namespace {

Eigen::VectorXd resolve_gains(const GradientConfig& cfg, Index m, const char* who) {
  Eigen::VectorXd g;
  if (cfg.gamma.size() == 1) g = Eigen::VectorXd::Constant(m, cfg.gamma(0));
  else if (cfg.gamma.size() == m) g = cfg.gamma;
  else throw std::invalid_argument(std::string(who) + ": expected 1 or " + std::to_string(m) + " gains");
  for (Index i = 0; i < g.size(); ++i)
    if (!(g(i) > 0.0)) throw std::invalid_argument(std::string(who) + ": gains must be positive");
  return g;
}

Eigen::VectorXd resolve_initial(const GradientConfig& cfg, Index m, const char* who) {
  if (cfg.theta_hat0.size() == 0) return Eigen::VectorXd::Zero(m);
  if (cfg.theta_hat0.size() != m) throw std::invalid_argument(std::string(who) + ": initial estimate dimension");
  return cfg.theta_hat0;
}

void require_pair(const Trajectory& y, const Trajectory& phi, SignalKind kind, const char* who) {
  if (!y.is_scalar() || !phi.is_vector()) throw std::invalid_argument(std::string(who) + ": y scalar, phi vector");
  if (!(y.grid() == phi.grid()) || y.kind() != kind || phi.kind() != kind)
    throw std::invalid_argument(std::string(who) + ": signals must share one grid of the right kind");
}

void require_mixed(const MixedRegression& mixed, SignalKind kind, const char* who) {
  if (!mixed.Delta.is_scalar() || !mixed.calY.is_vector() || !(mixed.Delta.grid() == mixed.calY.grid()))
    throw std::invalid_argument(std::string(who) + ": malformed mixed regression");
  if (mixed.Delta.kind() != kind || mixed.calY.kind() != kind)
    throw std::invalid_argument(std::string(who) + ": mixed regression has the wrong signal kind");
}

}  // namespace

void attach_truth(EstimatorRun& run, const Trajectory& theta) {
  if (!same_layout(run.theta_hat, theta)) throw std::invalid_argument("attach_truth: theta layout differs");
  run.theta_tilde = run.theta_hat - theta;
}

EstimatorRun ct_gradient(const Trajectory& y, const Trajectory& phi, const GradientConfig& cfg) {
  require_pair(y, phi, SignalKind::Continuous, "ct_gradient");
  const Index m = phi.rows();
  if (cfg.gamma.size() != 1) throw std::invalid_argument("ct_gradient: a single gain is required");
  const double gamma = resolve_gains(cfg, 1, "ct_gradient")(0);
  Eigen::VectorXd theta = resolve_initial(cfg, m, "ct_gradient");

  const auto rhs = [&](double t, const Eigen::VectorXd& th) -> Eigen::VectorXd {
    const Eigen::VectorXd p = phi.value_at(t);
    return gamma * p * (y.scalar_at(t) - p.dot(th));
  };

  const TimeGrid& grid = phi.grid();
  Trajectory::Storage est(m, grid.count());
  Eigen::VectorXd energy(grid.count());
  for (Index k = 0; k < grid.count(); ++k) {
    est.col(k) = theta;
    energy(k) = phi.vector(k).squaredNorm();
    if (k + 1 < grid.count()) theta = detail::rk4_step(rhs, grid.time(k), theta, grid.step());
  }
  return {Trajectory(grid, SignalKind::Continuous, m, 1, std::move(est)),
          Trajectory::scalars(grid, SignalKind::Continuous, energy), std::nullopt};
}

EstimatorRun dt_gradient(const Trajectory& y, const Trajectory& phi, const GradientConfig& cfg) {
  require_pair(y, phi, SignalKind::Discrete, "dt_gradient");
  const Index m = phi.rows();
  if (cfg.gamma.size() != 1) throw std::invalid_argument("dt_gradient: a single gain is required");
  const double gamma = resolve_gains(cfg, 1, "dt_gradient")(0);
  Eigen::VectorXd theta = resolve_initial(cfg, m, "dt_gradient");

  const TimeGrid& grid = phi.grid();
  Trajectory::Storage est(m, grid.count());
  Eigen::VectorXd energy(grid.count());
  for (Index k = 0; k < grid.count(); ++k) {
    const auto p = phi.vector(k);
    const double e2 = p.squaredNorm();
    theta += p * ((y.scalar(k) - p.dot(theta)) / (gamma + e2));
    est.col(k) = theta;
    energy(k) = e2;
  }
  return {Trajectory(grid, SignalKind::Discrete, m, 1, std::move(est)),
          Trajectory::scalars(grid, SignalKind::Discrete, energy), std::nullopt};
}

EstimatorRun drem_ct(const MixedRegression& mixed, const GradientConfig& cfg) {
  require_mixed(mixed, SignalKind::Continuous, "drem_ct");
  const Index m = mixed.calY.rows();
  const Eigen::VectorXd gamma = resolve_gains(cfg, m, "drem_ct");
  Eigen::VectorXd theta = resolve_initial(cfg, m, "drem_ct");

  const auto rhs = [&](double t, const Eigen::VectorXd& th) -> Eigen::VectorXd {
    const double delta = mixed.Delta.scalar_at(t);
    const Eigen::VectorXd calY = mixed.calY.value_at(t);
    return (gamma.array() * delta * (calY - delta * th).array()).matrix();
  };

  const TimeGrid& grid = mixed.Delta.grid();
  Trajectory::Storage est(m, grid.count());
  for (Index k = 0; k < grid.count(); ++k) {
    est.col(k) = theta;
    if (k + 1 < grid.count()) theta = detail::rk4_step(rhs, grid.time(k), theta, grid.step());
  }
  return {Trajectory(grid, SignalKind::Continuous, m, 1, std::move(est)), mixed.Delta, std::nullopt};
}

EstimatorRun drem_dt(const MixedRegression& mixed, const GradientConfig& cfg) {
  require_mixed(mixed, SignalKind::Discrete, "drem_dt");
  const Index m = mixed.calY.rows();
  const Eigen::VectorXd gamma = resolve_gains(cfg, m, "drem_dt");
  Eigen::VectorXd theta = resolve_initial(cfg, m, "drem_dt");

  const TimeGrid& grid = mixed.Delta.grid();
  Trajectory::Storage est(m, grid.count());
  for (Index k = 0; k < grid.count(); ++k) {
    const double delta = mixed.Delta.scalar(k);
    const auto calY = mixed.calY.vector(k);
    for (Index i = 0; i < m; ++i)
      theta(i) += delta / (gamma(i) + delta * delta) * (calY(i) - delta * theta(i));
    est.col(k) = theta;
  }
  return {Trajectory(grid, SignalKind::Discrete, m, 1, std::move(est)), mixed.Delta, std::nullopt};
}

Trajectory closed_form_error_ct(const Trajectory& Delta, double gamma, double theta_tilde0) {
  if (!Delta.is_scalar()) throw std::invalid_argument("closed_form_error_ct: scalar Delta required");
  const Eigen::VectorXd sq = Delta.samples().row(0).transpose().array().square();
  const Eigen::VectorXd energy = cumulative_simpson(sq, Delta.grid().step());
  const Eigen::VectorXd err = theta_tilde0 * (-gamma * energy.array()).exp();
  return Trajectory::scalars(Delta.grid(), Delta.kind(), err);
}

Trajectory closed_form_error_dt(const Trajectory& Delta, double gamma, double theta_tilde0) {
  if (!Delta.is_scalar()) throw std::invalid_argument("closed_form_error_dt: scalar Delta required");
  Eigen::VectorXd err(Delta.count());
  double e = theta_tilde0;
  for (Index k = 0; k < Delta.count(); ++k) {
    const double d = Delta.scalar(k);
    e /= 1.0 + d * d / gamma;
    err(k) = e;
  }
  return Trajectory::scalars(Delta.grid(), Delta.kind(), err);
}

std::optional<double> settling_time(const Trajectory& err, double tol, double from) {
  if (!err.is_scalar()) throw std::invalid_argument("settling_time: scalar error required");
  const Index first = std::max<Index>(0, err.grid().floor_index(from));
  Index settle = err.count();
  for (Index k = err.count() - 1; k >= first; --k) {
    if (std::abs(err.scalar(k)) > tol) break;
    settle = k;
  }
  if (settle == err.count()) return std::nullopt;
  return err.time(settle);
}

}  // namespace dremkit
