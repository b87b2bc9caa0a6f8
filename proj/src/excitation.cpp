#include "dremkit/excitation.hpp"

#include "dremkit/mixing.hpp"
#include "dremkit/quadrature.hpp"

#include <cmath>
#include <limits>

namespace dremkit {

namespace {

double min_eigenvalue(const Eigen::MatrixXd& G) {
  if (G.rows() == 1) return G(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

PeReport summarize(SignalKind kind, Index steps, double step, double threshold, Eigen::VectorXd mins) {
  Index worst = 0;
  const double lowest = mins.size() > 0 ? mins.minCoeff(&worst) : 0.0;
  const double alpha = std::max(0.0, lowest);
  return {kind, steps, static_cast<double>(steps) * step, threshold, alpha, alpha > threshold, worst, std::move(mins)};
}

}  // namespace

PeReport pe_check_ct(const Trajectory& phi, double window, double threshold) {
  if (phi.kind() != SignalKind::Continuous || !phi.is_vector())
    throw std::invalid_argument("pe_check_ct: continuous-time vector regressor required");
  const TimeGrid& grid = phi.grid();
  const Index steps = grid.steps_for(window);
  if (steps < 1 || std::abs(static_cast<double>(steps) * grid.step() - window) > 1e-9 * std::max(1.0, window))
    throw std::invalid_argument("pe_check_ct: window must be a positive whole number of grid steps");
  if (grid.count() - 1 < 2 * steps)
    throw std::invalid_argument("pe_check_ct: horizon " + std::to_string(grid.horizon()) +
                                " s is shorter than twice the window");

  const Index m = phi.rows();
  const Eigen::MatrixXd gram = cumulative_simpson(Eigen::MatrixXd(outer(phi).samples()), grid.step());
  const Index starts = grid.count() - steps;
  Eigen::VectorXd mins(starts);
  for (Index s = 0; s < starts; ++s) {
    const Eigen::VectorXd g = gram.col(s + steps) - gram.col(s);
    Eigen::MatrixXd G = Eigen::Map<const Eigen::MatrixXd>(g.data(), m, m);
    G = 0.5 * (G + G.transpose()).eval();
    mins(s) = min_eigenvalue(G);
  }
  return summarize(SignalKind::Continuous, steps, grid.step(), threshold, std::move(mins));
}

PeReport pe_check_dt(const Trajectory& phi, Index window, double threshold) {
  if (phi.kind() != SignalKind::Discrete || !phi.is_vector())
    throw std::invalid_argument("pe_check_dt: discrete-time vector regressor required");
  const Index m = phi.rows();
  if (window < m)
    throw std::invalid_argument("pe_check_dt: window " + std::to_string(window) + " is shorter than dimension " +
                                std::to_string(m));
  if (phi.count() < window) throw std::invalid_argument("pe_check_dt: sequence shorter than the window");

  const Index starts = phi.count() - window + 1;
  Eigen::VectorXd mins(starts);
  Eigen::MatrixXd G(m, m);
  for (Index s = 0; s < starts; ++s) {
    G.setZero();
    for (Index j = s; j < s + window; ++j) {
      const auto p = phi.vector(j);
      for (Index c = 0; c < m; ++c)
        for (Index r = 0; r < m; ++r) G(r, c) += p(r) * p(c);
    }
    mins(s) = min_eigenvalue(G);
  }
  return summarize(SignalKind::Discrete, window, phi.grid().step(), threshold, std::move(mins));
}

Trajectory cumulative_energy(const Trajectory& Delta) {
  if (!Delta.is_scalar()) throw std::invalid_argument("cumulative_energy: scalar Delta required");
  const Eigen::VectorXd sq = Delta.samples().row(0).transpose().array().square();
  Eigen::VectorXd energy(sq.size());
  if (Delta.kind() == SignalKind::Continuous) {
    energy = cumulative_simpson(sq, Delta.grid().step());
  } else {
    double acc = 0.0;
    for (Index k = 0; k < sq.size(); ++k) energy(k) = acc += sq(k);
  }
  return Trajectory::scalars(Delta.grid(), Delta.kind(), energy);
}

EnergyVerdict energy_versus_envelope(const Trajectory& energy, const std::function<double(double)>& envelope) {
  const Index last = energy.count() - 1;
  const double e = energy.scalar(last);
  const double bound = envelope(energy.time(last));
  return {e, bound, e >= bound};
}

CounterexampleReport counterexample_suite(const CounterexampleOptions& options) {
  if (options.horizon < 2 || options.max_window < 1 || options.max_window > options.horizon)
    throw std::invalid_argument("counterexample_suite: horizon and window bounds are inconsistent");
  const TimeGrid grid(0.0, 1.0, options.horizon);

  const Trajectory phi = Trajectory::generate(grid, SignalKind::Discrete, 1, 1, [](Index k, double) {
    return std::pow(static_cast<double>(k + 1), -0.25);
  });
  const Trajectory zeros = Trajectory::scalars(grid, SignalKind::Discrete, Eigen::VectorXd::Zero(grid.count()));

  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(options.max_window));
  bool not_pe = true;
  for (Index K = 1; K <= options.max_window; ++K) {
    const double a = pe_check_dt(phi, K, options.threshold).alpha_hat;
    alphas.push_back(a);
    not_pe = not_pe && a < options.threshold;
  }

  // One-sample window: Phi(k) = phi(k-1)^2 = Delta(k).
  const MixedRegression mixed = mix(sliding_window_extend(zeros, phi, 1));
  Trajectory energy = cumulative_energy(mixed.Delta);
  const double factor = options.envelope_factor;
  const double n = static_cast<double>(options.horizon);
  const EnergyVerdict verdict = energy_versus_envelope(energy, [factor, n](double) { return factor * std::log(n); });

  const Trajectory basis = Trajectory::generate(grid, SignalKind::Discrete, 2, 1, [](Index k, double) {
    return k % 2 == 0 ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
  });
  const double pe_alpha = pe_check_dt(basis, 2, options.threshold).alpha_hat;
  const MixedRegression pe_mixed = mix(sliding_window_extend(zeros, basis, 2));
  double pe_min = std::numeric_limits<double>::infinity();
  for (Index k = 2; k < grid.count(); ++k) pe_min = std::min(pe_min, pe_mixed.Delta.scalar(k));
  const Trajectory pe_energy = cumulative_energy(pe_mixed.Delta);

  const MixedRegression zero_mixed = mix(sliding_window_extend(zeros, zeros, 1));
  const double zero_energy = cumulative_energy(zero_mixed.Delta).scalar(grid.count() - 1);

  return {options,
          std::move(alphas),
          not_pe,
          std::move(energy),
          verdict,
          pe_alpha,
          pe_min,
          pe_energy.scalar(grid.count() - 1) / n,
          zero_energy};
}

}  // namespace dremkit
