#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qzdswap {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform sampling grid over one propagation interval. `start` is the
/// global time of the first sample; the generator sees local time in
/// [0, duration].
struct TimeGrid {
  double start = 0.0;
  double duration = 1.0;
  double dt = 1e-3;
  int sample_every = 1;

  int steps() const {
    const double ratio = duration / dt;
    const double rounded = std::round(ratio);
    if (!(dt > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
      throw std::invalid_argument("dt must divide the time span evenly");
    }
    return static_cast<int>(rounded);
  }
};

/// One classical fourth-order Runge-Kutta step of dy/dt = f(t, y).
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double dt) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace qzdswap
