#pragma once

#include "dremkit/signals.hpp"

#include <functional>

namespace dremkit {

/// Finite-horizon excitation certificate: the smallest eigenvalue of the
/// windowed Gramian over every admissible window start. Persistency of
/// excitation is asymptotic; "is_pe" only states alpha_hat > threshold on
/// the tested horizon.
struct PeReport {
  SignalKind kind;
  Index window_steps;
  double window_seconds;  // window_steps * step
  double threshold;
  double alpha_hat;       // max(0, min over starts of lambda_min)
  bool is_pe;
  Index worst_start;      // sample index of the minimising window
  Eigen::VectorXd min_eigenvalues;  // lambda_min per window start (unclamped)
};

/// Gramians int_t^{t+T} phi phi^T by cumulative Simpson. T must be a whole
/// number of grid steps and the horizon at least 2T.
PeReport pe_check_ct(const Trajectory& phi, double window, double threshold = 1e-3);

/// Exact windowed sums over samples s, ..., s+K-1 for every start s. K >= m.
PeReport pe_check_dt(const Trajectory& phi, Index window, double threshold = 1e-3);

/// t -> int_0^t Delta^2 (cumulative Simpson) or k -> sum_{j<=k} Delta(j)^2.
Trajectory cumulative_energy(const Trajectory& Delta);

/// Compares the final cumulative energy against envelope(final time).
struct EnergyVerdict {
  double final_energy;
  double final_envelope;
  bool exceeds_envelope;
};
EnergyVerdict energy_versus_envelope(const Trajectory& energy, const std::function<double(double)>& envelope);

struct CounterexampleOptions {
  Index horizon = 100000;
  Index max_window = 100;
  double threshold = 1e-3;
  double envelope_factor = 0.9;  // energy must reach factor * ln(horizon)
};

/// phi(k) = (k+1)^(-1/4) extended with a one-sample window: the resulting
/// Delta is not square-summable while phi's windowed excitation decays.
/// The PE direction is exercised on alternating basis vectors.
struct CounterexampleReport {
  CounterexampleOptions options;
  std::vector<double> alpha_hat;  // alpha_hat[K-1] for K = 1..max_window
  bool not_pe_for_all_windows;    // every alpha_hat below threshold
  Trajectory energy;              // cumulative sum of Delta^2
  EnergyVerdict divergence;       // against envelope_factor * ln(horizon)
  // alternating e1, e2 with a two-sample window
  double pe_alpha_hat;
  double pe_min_delta;            // min Delta(k) once the window is full
  double pe_energy_per_sample;    // final energy / horizon
  // zero regressor
  double zero_energy;
};

CounterexampleReport counterexample_suite(const CounterexampleOptions& options = {});

}  // namespace dremkit
