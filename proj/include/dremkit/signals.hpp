#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace dremkit {

using Eigen::Index;

/// Continuous-time signals are sampled on a uniform grid; discrete-time
/// sequences use the same grid with `step` as the sampling time.
enum class SignalKind { Continuous, Discrete };

class TimeGrid {
 public:
  TimeGrid(double t0, double step, Index count) : t0_(t0), step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("TimeGrid: step must be positive");
    if (count < 1) throw std::invalid_argument("TimeGrid: count must be at least 1");
  }

  /// Grid covering [t0, t0 + horizon]; horizon is rounded to a whole number of steps.
  static TimeGrid spanning(double t0, double step, double horizon) {
    if (horizon < 0.0) throw std::invalid_argument("TimeGrid: negative horizon");
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
    return TimeGrid(t0, step, static_cast<Index>(std::llround(horizon / step)) + 1);
  }

  double t0() const { return t0_; }
  double step() const { return step_; }
  Index count() const { return count_; }
  double time(Index k) const { return t0_ + static_cast<double>(k) * step_; }
  double horizon() const { return static_cast<double>(count_ - 1) * step_; }

  /// Number of whole steps closest to `duration`.
  Index steps_for(double duration) const { return static_cast<Index>(std::llround(duration / step_)); }
  /// Index of the last grid point not after t (clamped to the grid).
  Index floor_index(double t) const;
  /// Index of the grid point nearest to t (clamped to the grid).
  Index nearest_index(double t) const;

  bool operator==(const TimeGrid& other) const {
    return t0_ == other.t0_ && step_ == other.step_ && count_ == other.count_;
  }

 private:
  double t0_;
  double step_;
  Index count_;
};

/// Uniformly sampled scalar, vector or matrix signal. Each sample is stored
/// as one column of `samples()` (matrices column-major). Immutable once built.
template <typename Scalar_>
class BasicTrajectory {
 public:
  using Scalar = Scalar_;
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using ConstVectorMap = Eigen::Map<const Vector>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;

  BasicTrajectory(TimeGrid grid, SignalKind kind, Index rows, Index cols, Storage samples)
      : grid_(grid), kind_(kind), rows_(rows), cols_(cols), samples_(std::move(samples)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Trajectory: sample shape must be non-empty");
    if (samples_.rows() != rows * cols || samples_.cols() != grid.count())
      throw std::invalid_argument("Trajectory: sample storage does not match shape and grid");
  }

  static BasicTrajectory scalars(TimeGrid grid, SignalKind kind, const Vector& values) {
    return BasicTrajectory(grid, kind, 1, 1, values.transpose());
  }

  /// Builds a trajectory from f(k, t), which returns a scalar or an Eigen
  /// vector/matrix of shape rows x cols.
  template <typename F>
  static BasicTrajectory generate(TimeGrid grid, SignalKind kind, Index rows, Index cols, F&& f) {
    Storage s(rows * cols, grid.count());
    for (Index k = 0; k < grid.count(); ++k) {
      if constexpr (std::is_arithmetic_v<std::invoke_result_t<F, Index, double>>) {
        s(0, k) = static_cast<Scalar>(f(k, grid.time(k)));
      } else {
        const auto value = f(k, grid.time(k));
        if (value.rows() != rows || value.cols() != cols)
          throw std::invalid_argument("Trajectory::generate: sample has the wrong shape");
        s.col(k) = Eigen::Map<const Vector>(Matrix(value).data(), rows * cols);
      }
    }
    return BasicTrajectory(grid, kind, rows, cols, std::move(s));
  }

  const TimeGrid& grid() const { return grid_; }
  SignalKind kind() const { return kind_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index count() const { return grid_.count(); }
  Index sample_size() const { return rows_ * cols_; }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }
  bool is_vector() const { return cols_ == 1; }
  double time(Index k) const { return grid_.time(k); }
  const Storage& samples() const { return samples_; }

  Scalar scalar(Index k) const { return samples_(0, k); }
  ConstVectorMap vector(Index k) const { return ConstVectorMap(samples_.col(k).data(), rows_ * cols_); }
  ConstMatrixMap matrix(Index k) const { return ConstMatrixMap(samples_.col(k).data(), rows_, cols_); }

  /// Scalar trajectory holding flattened component i of every sample.
  BasicTrajectory component(Index i) const {
    return BasicTrajectory(grid_, kind_, 1, 1, samples_.row(i));
  }

  /// Samples [begin, end) on the corresponding sub-grid.
  BasicTrajectory slice(Index begin, Index end) const {
    if (begin < 0 || end > count() || end <= begin) throw std::out_of_range("Trajectory::slice: bad range");
    return BasicTrajectory(TimeGrid(grid_.time(begin), grid_.step(), end - begin), kind_, rows_, cols_,
                           samples_.middleCols(begin, end - begin));
  }

  /// Flattened sample at t, by cubic Lagrange interpolation on the four
  /// nearest grid points (lower order when the grid is shorter). Grid
  /// instants return the stored sample exactly; t is clamped to the grid.
  Vector value_at(double t) const;
  Scalar scalar_at(double t) const { return value_at(t)(0); }

 private:
  TimeGrid grid_;
  SignalKind kind_;
  Index rows_;
  Index cols_;
  Storage samples_;
};

using Trajectory = BasicTrajectory<double>;

template <typename Scalar>
bool same_layout(const BasicTrajectory<Scalar>& a, const BasicTrajectory<Scalar>& b) {
  return a.grid() == b.grid() && a.kind() == b.kind() && a.rows() == b.rows() && a.cols() == b.cols();
}

template <typename Scalar>
BasicTrajectory<Scalar> operator+(const BasicTrajectory<Scalar>& a, const BasicTrajectory<Scalar>& b) {
  if (!same_layout(a, b)) throw std::invalid_argument("Trajectory +: layouts differ");
  return BasicTrajectory<Scalar>(a.grid(), a.kind(), a.rows(), a.cols(), a.samples() + b.samples());
}

template <typename Scalar>
BasicTrajectory<Scalar> operator-(const BasicTrajectory<Scalar>& a, const BasicTrajectory<Scalar>& b) {
  if (!same_layout(a, b)) throw std::invalid_argument("Trajectory -: layouts differ");
  return BasicTrajectory<Scalar>(a.grid(), a.kind(), a.rows(), a.cols(), a.samples() - b.samples());
}

template <typename Scalar>
BasicTrajectory<Scalar> operator*(Scalar c, const BasicTrajectory<Scalar>& a) {
  return BasicTrajectory<Scalar>(a.grid(), a.kind(), a.rows(), a.cols(), c * a.samples());
}

/// Pointwise outer product v(t) v(t)^T of a vector trajectory.
template <typename Scalar>
BasicTrajectory<Scalar> outer(const BasicTrajectory<Scalar>& v) {
  if (!v.is_vector()) throw std::invalid_argument("outer: vector trajectory required");
  const Index m = v.rows();
  typename BasicTrajectory<Scalar>::Storage s(m * m, v.count());
  for (Index k = 0; k < v.count(); ++k) {
    const auto x = v.vector(k);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) s(i + j * m, k) = x(i) * x(j);
  }
  return BasicTrajectory<Scalar>(v.grid(), v.kind(), m, m, std::move(s));
}

namespace detail {
// Lagrange basis weights for the given nodes evaluated at x.
inline void lagrange_weights(const double* nodes, int n, double x, double* w) {
  for (int i = 0; i < n; ++i) {
    double num = 1.0, den = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      num *= x - nodes[j];
      den *= nodes[i] - nodes[j];
    }
    w[i] = num / den;
  }
}
}  // namespace detail

template <typename Scalar>
typename BasicTrajectory<Scalar>::Vector BasicTrajectory<Scalar>::value_at(double t) const {
  const double s = (t - grid_.t0()) / grid_.step();
  const Index n = count();
  if (s <= 0.0 || n == 1) return samples_.col(0);
  if (s >= static_cast<double>(n - 1)) return samples_.col(n - 1);
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) return samples_.col(static_cast<Index>(nearest));

  auto left = static_cast<Index>(std::floor(s));
  double frac = s - static_cast<double>(left);
  // Half-step evaluations dominate (RK4 stages); snap so they hit the
  // symmetric stencil exactly.
  if (std::abs(frac - 0.5) < 1e-9) frac = 0.5;

  const int order = static_cast<int>(std::min<Index>(n, 4));
  Index first = left - (order >= 4 ? 1 : 0);
  first = std::clamp<Index>(first, 0, n - order);
  double nodes[4];
  double weights[4];
  for (int i = 0; i < order; ++i) nodes[i] = static_cast<double>(first + i - left);
  detail::lagrange_weights(nodes, order, frac, weights);
  Vector out = Vector::Zero(sample_size());
  for (int i = 0; i < order; ++i) out += static_cast<Scalar>(weights[i]) * samples_.col(first + i);
  return out;
}

/// y = phi^T theta for a single sample.
double eval_lre(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi);

/// Sample-wise phi(t)^T theta(t) for vector trajectories phi and theta.
Trajectory eval_lre(const Trajectory& theta, const Trajectory& phi);

/// Piecewise parameter profile: constants and linear ramps, right-continuous
/// at piece boundaries.
class ThetaSchedule {
 public:
  struct Piece {
    double start;
    Eigen::VectorXd value;  // value at `start`
    Eigen::VectorXd slope;  // per second; zero for constant pieces
  };

  explicit ThetaSchedule(std::vector<Piece> pieces);

  static ThetaSchedule constant(const Eigen::VectorXd& value);
  /// 10 on [0,10), 15 on [10,20), 15 - 0.5(t-20) on [20,30), 10 afterwards.
  static ThetaSchedule jump_and_ramp();

  Eigen::VectorXd operator()(double t) const;
  Index dimension() const { return pieces_.front().value.size(); }
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  std::vector<Piece> pieces_;
};

Trajectory sample_schedule(const ThetaSchedule& schedule, const TimeGrid& grid,
                           SignalKind kind = SignalKind::Continuous);

}  // namespace dremkit
