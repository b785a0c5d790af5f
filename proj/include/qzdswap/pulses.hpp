#pragma once

// Invariant-based inverse engineering of the laser pulses.
//
// Time is measured in units of 1/g0 and frequencies in units of g0. The
// auxiliary angles (nu, beta) parametrize the invariant of the effective
// three-level problem; the pulse pair follows from them algebraically.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qzdswap {

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Auxiliary angles with analytic first derivatives.
struct AngleSchedule {
  std::function<double(double)> nu;
  std::function<double(double)> beta;
  std::function<double(double)> nu_dot;
  std::function<double(double)> beta_dot;
};

/// nu(t) = epsilon, beta(t) = pi t / (2 t_f).
inline AngleSchedule protocol_angles(double epsilon, double t_f) {
  const double rate = std::numbers::pi / (2.0 * t_f);
  return AngleSchedule{
      [epsilon](double) { return epsilon; },
      [rate](double t) { return rate * t; },
      [](double) { return 0.0; },
      [rate](double) { return rate; },
  };
}

/// Sin/cos shaped pulse pair. The initial leg couples the state the transfer
/// starts from and rises from zero; the target leg starts at its peak and
/// vanishes at t_f. Sign factors are laser phases applied when the pulse
/// enters a Hamiltonian; the envelopes themselves are unsigned.
struct PulseSchedule {
  double peak = 0.0;
  double t_f = 1.0;
  double sign_initial = 1.0;
  double sign_target = 1.0;

  double omega_initial_leg(double t) const {
    return peak * std::sin(std::numbers::pi * t / (2.0 * t_f));
  }
  double omega_target_leg(double t) const {
    return peak * std::cos(std::numbers::pi * t / (2.0 * t_f));
  }

  PulseSchedule scaled(double factor) const {
    PulseSchedule p = *this;
    p.peak *= factor;
    return p;
  }
  PulseSchedule with_signs(double initial, double target) const {
    PulseSchedule p = *this;
    p.sign_initial = initial;
    p.sign_target = target;
    return p;
  }
};

/// Amplitude factor reproducing the Zeno-reduced coupling Omega/sqrt(2).
inline const double kZenoAmplitudeFactor = 1.0 / std::numbers::sqrt2;
/// Amplitude factor for a directly driven Lambda system (no projection).
inline constexpr double kLambdaAmplitudeFactor = 0.5;

/// Peak amplitude A = factor * (pi / t_f) * cot(epsilon); factor 1/sqrt(2) gives the
/// Zeno-step pulses, factor 1/2 the exact Lambda-system pulses.
inline PulseSchedule protocol_pulses(double epsilon, double t_f, double amplitude_factor) {
  if (!(epsilon > 0.0 && epsilon < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("epsilon must lie in (0, pi/2)");
  }
  if (!(t_f > 0.0)) throw std::invalid_argument("t_f must be positive");
  if (!(amplitude_factor > 0.0)) throw std::invalid_argument("amplitude factor must be positive");
  PulseSchedule p;
  p.t_f = t_f;
  p.peak = amplitude_factor * (std::numbers::pi / t_f) / std::tan(epsilon);
  return p;
}

/// Pulses that make the given angles an exact solution of the angle equations.
inline std::pair<double, double> inverse_engineer(const AngleSchedule& angles, double t) {
  const double nu = angles.nu(t);
  const double s = std::sin(nu);
  if (std::abs(s) < 1e-14) throw SingularityError("cot(nu) is singular: sin(nu) = 0");
  const double cot_nu = std::cos(nu) / s;
  const double beta = angles.beta(t);
  const double nu_dot = angles.nu_dot(t);
  const double beta_dot = angles.beta_dot(t);
  const double initial =
      std::numbers::sqrt2 * (beta_dot * cot_nu * std::sin(beta) + nu_dot * std::cos(beta));
  const double target =
      std::numbers::sqrt2 * (beta_dot * cot_nu * std::cos(beta) - nu_dot * std::sin(beta));
  return {initial, target};
}

struct AngleResidual {
  double nu = 0.0;
  double beta = 0.0;
};

/// Residual of the auxiliary-angle equations
///   nu'   = (Omega_i cos(beta) - Omega_t sin(beta)) / sqrt(2)
///   beta' = tan(nu) (Omega_t cos(beta) + Omega_i sin(beta)) / sqrt(2)
/// evaluated with the unsigned pulse envelopes.
inline AngleResidual angle_ode_residual(const AngleSchedule& angles, const PulseSchedule& pulses,
                                        double t) {
  const double nu = angles.nu(t);
  const double beta = angles.beta(t);
  const double wi = pulses.omega_initial_leg(t);
  const double wt = pulses.omega_target_leg(t);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  AngleResidual r;
  r.nu = angles.nu_dot(t) - (wi * c - wt * s) / std::numbers::sqrt2;
  r.beta = angles.beta_dot(t) - std::tan(nu) * (wt * c + wi * s) / std::numbers::sqrt2;
  return r;
}

/// Accumulated Lewis-Riesenfeld phases of the |Phi_+> and |Phi_-> modes over one transfer.
struct PhaseRecord {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;

  double magnitude() const { return std::abs(alpha_plus); }
};

/// Closed form |alpha| = pi / (2 sin(epsilon)). The mode with positive
/// invariant eigenvalue accumulates the negative phase under i d/dt psi = H psi,
/// which is what quadrature of <Phi| i d/dt - H |Phi> returns.
inline PhaseRecord lr_phase(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= std::numbers::pi / 2.0)) {
    throw std::invalid_argument("epsilon must lie in (0, pi/2]");
  }
  const double alpha = std::numbers::pi / (2.0 * std::sin(epsilon));
  return {-alpha, alpha};
}

}  // namespace qzdswap
