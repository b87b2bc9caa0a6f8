#pragma once

namespace dremkit::detail {

/// One classical Runge-Kutta step of x' = f(t, x).
template <typename State, typename Derivative>
State rk4_step(const Derivative& f, double t, const State& x, double h) {
  const double half = 0.5 * h;
  const State k1 = f(t, x);
  const State k2 = f(t + half, State(x + half * k1));
  const State k3 = f(t + half, State(x + half * k2));
  const State k4 = f(t + h, State(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace dremkit::detail
