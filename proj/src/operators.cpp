#include "dremkit/operators.hpp"

#include "dremkit/rk4.hpp"

#include <sstream>

namespace dremkit {

namespace {

void check_stable(SignalKind domain, const Eigen::MatrixXd& A) {
  if (A.size() == 0) return;
  const Eigen::VectorXcd eig = A.eigenvalues();
  for (Index i = 0; i < eig.size(); ++i) {
    const bool ok = domain == SignalKind::Continuous ? eig(i).real() < 0.0 : std::abs(eig(i)) < 1.0;
    if (!ok) {
      std::ostringstream os;
      os << "LtvChannel: time-invariant A has eigenvalue " << eig(i) << " outside the stability region";
      throw std::invalid_argument(os.str());
    }
  }
}

void require_scalar_input(const Trajectory& u, SignalKind kind, const char* who) {
  if (!u.is_scalar()) throw std::invalid_argument(std::string(who) + ": scalar input required");
  if (u.kind() != kind) throw std::invalid_argument(std::string(who) + ": input has the wrong signal kind");
}

}  // namespace

LtvChannel::LtvChannel(SignalKind domain, Index state_dim, TimeVarying<Eigen::MatrixXd> A,
                       TimeVarying<Eigen::VectorXd> b, TimeVarying<Eigen::VectorXd> c,
                       TimeVarying<double> feedthrough, TimeVarying<double> delay_gain, double delay,
                       Eigen::VectorXd x0)
    : domain_(domain),
      state_dim_(state_dim),
      A_(std::move(A)),
      b_(std::move(b)),
      c_(std::move(c)),
      feedthrough_(std::move(feedthrough)),
      delay_gain_(std::move(delay_gain)),
      delay_(delay),
      x0_(std::move(x0)) {
  if (state_dim_ < 0) throw std::invalid_argument("LtvChannel: negative state dimension");
  if (!(delay_ >= 0.0)) throw std::invalid_argument("LtvChannel: delay must be non-negative");
  if (domain_ == SignalKind::Discrete && delay_ != std::floor(delay_))
    throw std::invalid_argument("LtvChannel: discrete delay must be a whole number of samples");
  if (x0_.size() == 0) x0_ = Eigen::VectorXd::Zero(state_dim_);
  if (x0_.size() != state_dim_) throw std::invalid_argument("LtvChannel: initial state has the wrong dimension");
  if (A_.is_constant() && (A_.constant_value().rows() != state_dim_ || A_.constant_value().cols() != state_dim_))
    throw std::invalid_argument("LtvChannel: A has the wrong shape");
  if (b_.is_constant() && b_.constant_value().size() != state_dim_)
    throw std::invalid_argument("LtvChannel: b has the wrong dimension");
  if (c_.is_constant() && c_.constant_value().size() != state_dim_)
    throw std::invalid_argument("LtvChannel: c has the wrong dimension");
  // Time-varying stability is the caller's declaration.
  if (A_.is_constant()) check_stable(domain_, A_.constant_value());
}

LtvChannel LtvChannel::lti(SignalKind domain, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double feedthrough) {
  return LtvChannel(domain, A.rows(), A, b, c, feedthrough);
}

LtvChannel LtvChannel::feedthrough(SignalKind domain, TimeVarying<double> d) {
  return LtvChannel(domain, 0, Eigen::MatrixXd(0, 0), Eigen::VectorXd(0), Eigen::VectorXd(0), std::move(d));
}

LtvChannel LtvChannel::pure_delay(SignalKind domain, TimeVarying<double> gain, double delay) {
  return LtvChannel(domain, 0, Eigen::MatrixXd(0, 0), Eigen::VectorXd(0), Eigen::VectorXd(0), 0.0,
                    std::move(gain), delay);
}

Trajectory apply_channel_ct(const LtvChannel& ch, const Trajectory& u, Warnings* warnings) {
  require_scalar_input(u, SignalKind::Continuous, "apply_channel_ct");
  if (ch.domain() != SignalKind::Continuous)
    throw std::invalid_argument("apply_channel_ct: channel was declared for discrete time");

  const TimeGrid& grid = u.grid();
  const double h = grid.step();
  const Index lag = grid.steps_for(ch.delay());
  if (warnings && std::abs(ch.delay() - static_cast<double>(lag) * h) > 1e-9 * h) {
    std::ostringstream os;
    os << "delay " << ch.delay() << " s rounded to " << lag << " grid steps (" << static_cast<double>(lag) * h
       << " s)";
    warnings->push_back(os.str());
  }

  const Index n = ch.state_dim();
  Eigen::VectorXd x = ch.initial_state();
  Eigen::VectorXd z(grid.count());
  const auto rhs = [&](double t, const Eigen::VectorXd& state) -> Eigen::VectorXd {
    return ch.A()(t) * state + ch.b()(t) * u.scalar_at(t);
  };

  for (Index k = 0; k < grid.count(); ++k) {
    const double t = grid.time(k);
    double out = ch.feedthrough()(t) * u.scalar(k);
    if (n > 0) out += ch.c()(t).dot(x);
    if (k >= lag) out += ch.delay_gain()(t) * u.scalar(k - lag);
    z(k) = out;
    if (n > 0 && k + 1 < grid.count()) x = detail::rk4_step(rhs, t, x, h);
  }
  return Trajectory::scalars(grid, SignalKind::Continuous, z);
}

Trajectory apply_channel_dt(const LtvChannel& ch, const Trajectory& u) {
  require_scalar_input(u, SignalKind::Discrete, "apply_channel_dt");
  if (ch.domain() != SignalKind::Discrete)
    throw std::invalid_argument("apply_channel_dt: channel was declared for continuous time");

  const TimeGrid& grid = u.grid();
  const auto lag = static_cast<Index>(ch.delay());
  const Index n = ch.state_dim();
  Eigen::VectorXd x = ch.initial_state();
  Eigen::VectorXd next(n);
  Eigen::VectorXd z(grid.count());

  for (Index k = 0; k < grid.count(); ++k) {
    const double t = grid.time(k);
    const double uk = u.scalar(k);
    // Sequential sums: the windowed extension relies on this summation order.
    double out = 0.0;
    if (n > 0) {
      const Eigen::VectorXd c = ch.c()(t);
      for (Index i = 0; i < n; ++i) out += c(i) * x(i);
    }
    out += ch.feedthrough()(t) * uk;
    if (k >= lag) out += ch.delay_gain()(t) * u.scalar(k - lag);
    z(k) = out;

    if (n > 0) {
      const Eigen::MatrixXd A = ch.A()(t);
      const Eigen::VectorXd b = ch.b()(t);
      for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index j = 0; j < n; ++j) acc += A(i, j) * x(j);
        next(i) = acc + b(i) * uk;
      }
      x.swap(next);
    }
  }
  return Trajectory::scalars(grid, SignalKind::Discrete, z);
}

Trajectory apply_channel(const LtvChannel& ch, const Trajectory& u, Warnings* warnings) {
  return u.kind() == SignalKind::Continuous ? apply_channel_ct(ch, u, warnings) : apply_channel_dt(ch, u);
}

ExtendedRegression extend(const OperatorBank& bank, const Trajectory& y, const Trajectory& phi, Warnings* warnings) {
  if (!y.is_scalar()) throw std::invalid_argument("extend: y must be scalar");
  if (!phi.is_vector()) throw std::invalid_argument("extend: phi must be a vector trajectory");
  if (!(y.grid() == phi.grid()) || y.kind() != phi.kind())
    throw std::invalid_argument("extend: y and phi must share one grid and kind");
  const Index m = phi.rows();
  if (static_cast<Index>(bank.size()) != m)
    throw std::invalid_argument("extend: bank has " + std::to_string(bank.size()) + " channels but phi has dimension " +
                                std::to_string(m));

  const Index count = phi.count();
  Trajectory::Storage Y(m, count);
  Trajectory::Storage Phi(m * m, count);
  std::vector<Trajectory> components;
  components.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) components.push_back(phi.component(j));

  for (Index i = 0; i < m; ++i) {
    const auto& ch = bank[static_cast<std::size_t>(i)];
    Y.row(i) = apply_channel(ch, y, warnings).samples();
    for (Index j = 0; j < m; ++j)
      Phi.row(i + j * m) = apply_channel(ch, components[static_cast<std::size_t>(j)], warnings).samples();
  }
  return {Trajectory(y.grid(), y.kind(), m, 1, std::move(Y)), Trajectory(y.grid(), y.kind(), m, m, std::move(Phi))};
}

ExtendedRegression sliding_window_extend(const Trajectory& y, const Trajectory& phi, Index window) {
  if (phi.kind() != SignalKind::Discrete || y.kind() != SignalKind::Discrete)
    throw std::invalid_argument("sliding_window_extend: discrete-time signals required");
  if (!phi.is_vector() || !y.is_scalar() || !(y.grid() == phi.grid()))
    throw std::invalid_argument("sliding_window_extend: y scalar and phi vector on one grid required");
  const Index m = phi.rows();
  if (window < m)
    throw std::invalid_argument("sliding_window_extend: window " + std::to_string(window) +
                                " is shorter than the regressor dimension " + std::to_string(m));

  const Index count = phi.count();
  Trajectory::Storage Y = Trajectory::Storage::Zero(m, count);
  Trajectory::Storage Phi = Trajectory::Storage::Zero(m * m, count);
  for (Index k = 0; k < count; ++k) {
    for (Index j = 1; j <= window && k - j >= 0; ++j) {
      const auto p = phi.vector(k - j);
      const double yk = y.scalar(k - j);
      for (Index i = 0; i < m; ++i) {
        Y(i, k) += p(i) * yk;
        for (Index l = 0; l < m; ++l) Phi(i + l * m, k) += p(i) * p(l);
      }
    }
  }
  return {Trajectory(y.grid(), y.kind(), m, 1, std::move(Y)), Trajectory(y.grid(), y.kind(), m, m, std::move(Phi))};
}

OperatorBank sliding_window_bank(const Trajectory& phi, Index window) {
  if (phi.kind() != SignalKind::Discrete || !phi.is_vector())
    throw std::invalid_argument("sliding_window_bank: discrete vector regressor required");
  if (window < phi.rows()) throw std::invalid_argument("sliding_window_bank: window shorter than regressor dimension");

  // x_j(k) = u(k - j), j = 1..window.
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(window, window);
  for (Index j = 1; j < window; ++j) shift(j, j - 1) = 1.0;
  Eigen::VectorXd inject = Eigen::VectorXd::Zero(window);
  inject(0) = 1.0;

  auto source = std::make_shared<const Trajectory>(phi);
  OperatorBank bank;
  for (Index i = 0; i < phi.rows(); ++i) {
    std::function<Eigen::VectorXd(double)> weights = [source, i, window](double t) {
      const Index k = source->grid().nearest_index(t);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(window);
      for (Index j = 1; j <= window && k - j >= 0; ++j) c(j - 1) = source->vector(k - j)(i);
      return c;
    };
    bank.emplace_back(SignalKind::Discrete, window, shift, inject, std::move(weights));
  }
  return bank;
}

KreOutput kre_ct(const KreSpec& spec, const Trajectory& y, const Trajectory& phi) {
  if (!(spec.pole > 0.0)) throw std::invalid_argument("kre_ct: pole must be positive");
  if (phi.kind() != SignalKind::Continuous || y.kind() != SignalKind::Continuous)
    throw std::invalid_argument("kre_ct: continuous-time signals required");
  if (!phi.is_vector() || !y.is_scalar() || !(y.grid() == phi.grid()))
    throw std::invalid_argument("kre_ct: y scalar and phi vector on one grid required");

  const Index m = phi.rows();
  const Index mm = m * m;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(mm + m);
  if (spec.Omega0.size() != 0) {
    if (spec.Omega0.rows() != m || spec.Omega0.cols() != m) throw std::invalid_argument("kre_ct: Omega0 shape");
    state.head(mm) = Eigen::Map<const Eigen::VectorXd>(spec.Omega0.data(), mm);
  }
  if (spec.Z0.size() != 0) {
    if (spec.Z0.size() != m) throw std::invalid_argument("kre_ct: Z0 dimension");
    state.tail(m) = spec.Z0;
  }

  const double a = spec.pole;
  const auto rhs = [&](double t, const Eigen::VectorXd& s) -> Eigen::VectorXd {
    const Eigen::VectorXd p = phi.value_at(t);
    const double yt = y.scalar_at(t);
    Eigen::VectorXd ds(mm + m);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) ds(i + j * m) = -a * s(i + j * m) + p(i) * p(j);
    for (Index i = 0; i < m; ++i) ds(mm + i) = -a * s(mm + i) + p(i) * yt;
    return ds;
  };

  const TimeGrid& grid = phi.grid();
  Trajectory::Storage Omega(mm, grid.count());
  Trajectory::Storage Z(m, grid.count());
  for (Index k = 0; k < grid.count(); ++k) {
    Omega.col(k) = state.head(mm);
    Z.col(k) = state.tail(m);
    if (k + 1 < grid.count()) state = detail::rk4_step(rhs, grid.time(k), state, grid.step());
  }
  return {Trajectory(grid, SignalKind::Continuous, m, 1, std::move(Z)),
          Trajectory(grid, SignalKind::Continuous, m, m, std::move(Omega))};
}

OperatorBank kre_as_drem_bank(const Trajectory& phi, double pole) {
  if (!(pole > 0.0)) throw std::invalid_argument("kre_as_drem_bank: pole must be positive");
  if (phi.kind() != SignalKind::Continuous || !phi.is_vector())
    throw std::invalid_argument("kre_as_drem_bank: continuous vector regressor required");
  auto source = std::make_shared<const Trajectory>(phi);
  OperatorBank bank;
  for (Index i = 0; i < phi.rows(); ++i) {
    std::function<Eigen::VectorXd(double)> input_gain = [source, i](double t) {
      return Eigen::VectorXd::Constant(1, source->value_at(t)(i));
    };
    bank.emplace_back(SignalKind::Continuous, 1, Eigen::MatrixXd(Eigen::MatrixXd::Constant(1, 1, -pole)),
                      std::move(input_gain), Eigen::VectorXd(Eigen::VectorXd::Ones(1)));
  }
  return bank;
}

}  // namespace dremkit
