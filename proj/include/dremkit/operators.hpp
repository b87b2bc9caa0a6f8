#pragma once

#include "dremkit/signals.hpp"

#include <memory>
#include <optional>

namespace dremkit {

/// Either a constant or a function of time. Discrete-time channels are
/// evaluated at the grid instants t0 + k*Ts.
template <typename Value>
class TimeVarying {
 public:
  TimeVarying(Value constant) : constant_(std::move(constant)) {}  // NOLINT(implicit)
  TimeVarying(std::function<Value(double)> fn) : fn_(std::move(fn)) {}  // NOLINT(implicit)

  Value operator()(double t) const { return fn_ ? fn_(t) : *constant_; }
  bool is_constant() const { return !fn_; }
  const Value& constant_value() const { return *constant_; }

 private:
  std::optional<Value> constant_;
  std::function<Value(double)> fn_;
};

/// One SISO extension channel
///   x' = A(t) x + b(t) u,  z = c(t)^T x + d(t) u + delay_gain(t) u(t - delay)
/// (x(k+1) = ... in discrete time). `delay` is in seconds for continuous
/// channels and in samples for discrete ones.
class LtvChannel {
 public:
  LtvChannel(SignalKind domain, Index state_dim, TimeVarying<Eigen::MatrixXd> A, TimeVarying<Eigen::VectorXd> b,
             TimeVarying<Eigen::VectorXd> c, TimeVarying<double> feedthrough = 0.0,
             TimeVarying<double> delay_gain = 0.0, double delay = 0.0, Eigen::VectorXd x0 = {});

  /// Time-invariant state-space channel with no delay tap.
  static LtvChannel lti(SignalKind domain, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& c, double feedthrough = 0.0);
  /// Static gain z = d(t) u.
  static LtvChannel feedthrough(SignalKind domain, TimeVarying<double> d);
  /// z = gain(t) u(t - delay).
  static LtvChannel pure_delay(SignalKind domain, TimeVarying<double> gain, double delay);

  SignalKind domain() const { return domain_; }
  Index state_dim() const { return state_dim_; }
  const TimeVarying<Eigen::MatrixXd>& A() const { return A_; }
  const TimeVarying<Eigen::VectorXd>& b() const { return b_; }
  const TimeVarying<Eigen::VectorXd>& c() const { return c_; }
  const TimeVarying<double>& feedthrough() const { return feedthrough_; }
  const TimeVarying<double>& delay_gain() const { return delay_gain_; }
  double delay() const { return delay_; }
  const Eigen::VectorXd& initial_state() const { return x0_; }

  bool time_invariant() const { return A_.is_constant() && b_.is_constant() && c_.is_constant(); }
  /// True when the feedthrough is the constant zero.
  bool has_zero_feedthrough() const { return feedthrough_.is_constant() && feedthrough_.constant_value() == 0.0; }

 private:
  SignalKind domain_;
  Index state_dim_;
  TimeVarying<Eigen::MatrixXd> A_;
  TimeVarying<Eigen::VectorXd> b_;
  TimeVarying<Eigen::VectorXd> c_;
  TimeVarying<double> feedthrough_;
  TimeVarying<double> delay_gain_;
  double delay_;
  Eigen::VectorXd x0_;
};

/// Row i of the extension operator H is channel i.
using OperatorBank = std::vector<LtvChannel>;

/// Non-fatal notes produced while applying operators (e.g. delay rounding).
using Warnings = std::vector<std::string>;

/// Continuous-time channel response on u's grid: RK4 over each step with u
/// evaluated between samples by cubic interpolation; u(t - T) = 0 for t < T.
Trajectory apply_channel_ct(const LtvChannel& channel, const Trajectory& u, Warnings* warnings = nullptr);

/// Discrete-time channel response by exact recursion; u(k - K) = 0 for k < K.
Trajectory apply_channel_dt(const LtvChannel& channel, const Trajectory& u);

/// Dispatches on u.kind().
Trajectory apply_channel(const LtvChannel& channel, const Trajectory& u, Warnings* warnings = nullptr);

struct ExtendedRegression {
  Trajectory Y;    // m-vector samples
  Trajectory Phi;  // m x m samples
};

/// Y_i = H_i[y], Phi_ij = H_i[phi_j].
ExtendedRegression extend(const OperatorBank& bank, const Trajectory& y, const Trajectory& phi,
                          Warnings* warnings = nullptr);

/// Discrete windowed extension
///   Phi(k) = sum_{j=1..window} phi(k-j) phi(k-j)^T,  Y(k) = sum_{j=1..window} phi(k-j) y(k-j),
/// with samples before the start of the sequence taken as zero.
ExtendedRegression sliding_window_extend(const Trajectory& y, const Trajectory& phi, Index window);

/// The same windowed extension written as a bank of LTV channels (a
/// delay line with time-varying output weights phi_i(k-j)).
OperatorBank sliding_window_bank(const Trajectory& phi, Index window);

/// Kreisselmeier's extension through 1/(p + a):
///   Omega' = -a Omega + phi phi^T,  Z' = -a Z + phi y.
struct KreSpec {
  double pole;
  Eigen::MatrixXd Omega0;  // empty means zero
  Eigen::VectorXd Z0;      // empty means zero
};

struct KreOutput {
  Trajectory Z;
  Trajectory Omega;
};

KreOutput kre_ct(const KreSpec& spec, const Trajectory& y, const Trajectory& phi);

/// Bank with n_i = 1, A_i = -a, b_i = phi_i(t), c_i = 1, d_i = 0, no delay,
/// whose extension reproduces kre_ct from zero initial conditions.
OperatorBank kre_as_drem_bank(const Trajectory& phi, double pole);

}  // namespace dremkit
