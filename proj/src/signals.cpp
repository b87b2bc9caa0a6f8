#include "dremkit/signals.hpp"

namespace dremkit {

Index TimeGrid::floor_index(double t) const {
  const double s = (t - t0_) / step_;
  const double nearest = std::round(s);
  const double f = std::abs(s - nearest) < 1e-9 ? nearest : std::floor(s);
  return std::clamp<Index>(static_cast<Index>(f), 0, count_ - 1);
}

Index TimeGrid::nearest_index(double t) const {
  const double s = std::round((t - t0_) / step_);
  return std::clamp<Index>(static_cast<Index>(s), 0, count_ - 1);
}

double eval_lre(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi) {
  if (theta.size() != phi.size())
    throw std::invalid_argument("eval_lre: theta has dimension " + std::to_string(theta.size()) +
                                " but phi has dimension " + std::to_string(phi.size()));
  return phi.dot(theta);
}

Trajectory eval_lre(const Trajectory& theta, const Trajectory& phi) {
  if (!theta.is_vector() || !phi.is_vector() || theta.rows() != phi.rows() || !(theta.grid() == phi.grid()))
    throw std::invalid_argument("eval_lre: theta and phi must be vector trajectories of equal dimension on one grid");
  Eigen::VectorXd y(phi.count());
  for (Index k = 0; k < phi.count(); ++k) y(k) = phi.vector(k).dot(theta.vector(k));
  return Trajectory::scalars(phi.grid(), phi.kind(), y);
}

ThetaSchedule::ThetaSchedule(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("ThetaSchedule: at least one piece required");
  const Index m = pieces_.front().value.size();
  if (m < 1) throw std::invalid_argument("ThetaSchedule: empty parameter vector");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto& p = pieces_[i];
    if (p.slope.size() == 0) p.slope = Eigen::VectorXd::Zero(m);
    if (p.value.size() != m || p.slope.size() != m)
      throw std::invalid_argument("ThetaSchedule: pieces disagree on dimension");
    if (i > 0 && !(p.start > pieces_[i - 1].start))
      throw std::invalid_argument("ThetaSchedule: piece start times must be strictly increasing");
  }
}

ThetaSchedule ThetaSchedule::constant(const Eigen::VectorXd& value) {
  return ThetaSchedule({{0.0, value, Eigen::VectorXd::Zero(value.size())}});
}

ThetaSchedule ThetaSchedule::jump_and_ramp() {
  using V = Eigen::VectorXd;
  return ThetaSchedule({
      {0.0, V::Constant(1, 10.0), V::Zero(1)},
      {10.0, V::Constant(1, 15.0), V::Zero(1)},
      {20.0, V::Constant(1, 15.0), V::Constant(1, -0.5)},
      {30.0, V::Constant(1, 10.0), V::Zero(1)},
  });
}

Eigen::VectorXd ThetaSchedule::operator()(double t) const {
  // Before the first piece the first piece's value holds.
  const Piece* active = &pieces_.front();
  for (const auto& p : pieces_) {
    if (p.start <= t) active = &p;
    else break;
  }
  const double elapsed = std::max(0.0, t - active->start);
  return active->value + elapsed * active->slope;
}

Trajectory sample_schedule(const ThetaSchedule& schedule, const TimeGrid& grid, SignalKind kind) {
  return Trajectory::generate(grid, kind, schedule.dimension(), 1,
                              [&](Index, double t) { return schedule(t); });
}

}  // namespace dremkit
