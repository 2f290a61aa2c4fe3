#pragma once

namespace crossing {

// One classic fourth-order Runge-Kutta step for y' = f(t, y) with fixed step h.
// State needs vector-space arithmetic (Eigen vectors, std::complex, double all
// qualify); f is called with (t, const State&) and must return something
// convertible to State. Intermediate sums are materialized so that expression
// templates never dangle.
template <typename State, typename Deriv>
State rk4_step(double t, double h, const State& y, Deriv&& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4));
}

}  // namespace crossing
