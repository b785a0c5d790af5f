#pragma once

// Lewis-Riesenfeld invariant of the effective three-level transfer
// |phi1> -> |mu> -> |phi5>, with |phi1> = |01>|0>, |phi5> = |1a>|0> and the
// dark state |mu> = (-|e1>|0> + |1e>|0>) / sqrt(2).

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "config.hpp"
#include "dynamics.hpp"
#include "pulses.hpp"
#include "zeno.hpp"

namespace qzdswap {

using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;

namespace effective_index {
inline constexpr int phi1 = 0;
inline constexpr int mu = 1;
inline constexpr int phi5 = 2;
}  // namespace effective_index

/// (phi1, mu, phi5) embedded in the full space, as a dim x 3 matrix.
inline DenseOperator effective_basis(const SpaceDescriptor& space) {
  DenseOperator e = DenseOperator::Zero(space.dim(), 3);
  e(basis_index({AtomLevel::g0, AtomLevel::g1, 0}, space), effective_index::phi1) = 1.0;
  e(basis_index({AtomLevel::ee, AtomLevel::g1, 0}, space), effective_index::mu) =
      -1.0 / std::numbers::sqrt2;
  e(basis_index({AtomLevel::g1, AtomLevel::ee, 0}, space), effective_index::mu) =
      1.0 / std::numbers::sqrt2;
  e(basis_index({AtomLevel::g1, AtomLevel::ga, 0}, space), effective_index::phi5) = 1.0;
  return e;
}

struct InvariantMatrix {
  double chi = 1.0;
  Matrix3 matrix = Matrix3::Zero();
};

inline InvariantMatrix build_invariant(double nu, double beta, double chi) {
  using namespace effective_index;
  const double s = chi / std::numbers::sqrt2;
  Matrix3 m = Matrix3::Zero();
  m(mu, phi1) = s * std::cos(nu) * std::sin(beta);
  m(mu, phi5) = s * std::cos(nu) * std::cos(beta);
  m(phi5, phi1) = s * kI * std::sin(nu);
  m(phi1, mu) = std::conj(m(mu, phi1));
  m(phi5, mu) = std::conj(m(mu, phi5));
  m(phi1, phi5) = std::conj(m(phi5, phi1));
  return {chi, m};
}

/// dI/dt from the analytic angle derivatives.
inline Matrix3 invariant_time_derivative(double nu, double beta, double nu_dot, double beta_dot,
                                         double chi) {
  using namespace effective_index;
  const double s = chi / std::numbers::sqrt2;
  Matrix3 m = Matrix3::Zero();
  m(mu, phi1) = s * (-std::sin(nu) * nu_dot * std::sin(beta) +
                     std::cos(nu) * std::cos(beta) * beta_dot);
  m(mu, phi5) = s * (-std::sin(nu) * nu_dot * std::cos(beta) -
                     std::cos(nu) * std::sin(beta) * beta_dot);
  m(phi5, phi1) = s * kI * std::cos(nu) * nu_dot;
  m(phi1, mu) = std::conj(m(mu, phi1));
  m(phi5, mu) = std::conj(m(mu, phi5));
  m(phi1, phi5) = std::conj(m(phi5, phi1));
  return m;
}

/// Eigenstates of the invariant with eigenvalues 0, +chi/sqrt(2), -chi/sqrt(2).
struct InvariantEigenstates {
  Vector3 zero;
  Vector3 plus;
  Vector3 minus;

  const Vector3& operator[](int n) const { return n == 0 ? zero : n == 1 ? plus : minus; }
};

inline InvariantEigenstates invariant_eigenstates(double nu, double beta) {
  const double cn = std::cos(nu), sn = std::sin(nu);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double r = 1.0 / std::numbers::sqrt2;
  InvariantEigenstates e;
  e.zero << cn * cb, -kI * sn, -cn * sb;
  e.plus << r * (sn * cb + kI * sb), r * kI * cn, -r * (sn * sb - kI * cb);
  e.minus << r * (sn * cb - kI * sb), r * kI * cn, -r * (sn * sb + kI * cb);
  return e;
}

/// Time derivatives of the eigenstates along (nu(t), beta(t)).
inline InvariantEigenstates invariant_eigenstate_derivatives(double nu, double beta, double nu_dot,
                                                             double beta_dot) {
  const double cn = std::cos(nu), sn = std::sin(nu);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double r = 1.0 / std::numbers::sqrt2;
  Vector3 d_nu, d_beta;
  InvariantEigenstates d;
  d_nu << -sn * cb, -kI * cn, sn * sb;
  d_beta << -cn * sb, 0.0, -cn * cb;
  d.zero = nu_dot * d_nu + beta_dot * d_beta;
  d_nu << r * cn * cb, -r * kI * sn, -r * cn * sb;
  d_beta << r * (-sn * sb + kI * cb), 0.0, -r * (sn * cb + kI * sb);
  d.plus = nu_dot * d_nu + beta_dot * d_beta;
  d_beta << r * (-sn * sb - kI * cb), 0.0, -r * (sn * cb - kI * sb);
  d.minus = nu_dot * d_nu + beta_dot * d_beta;
  return d;
}

/// Frobenius norm of i dI/dt - [H, I] for a 3x3 Hamiltonian in (phi1, mu, phi5) order.
inline double invariant_residual(const Matrix3& h, const AngleSchedule& angles, double t,
                                 double chi) {
  const double nu = angles.nu(t);
  const double beta = angles.beta(t);
  const Matrix3 inv = build_invariant(nu, beta, chi).matrix;
  const Matrix3 d_inv =
      invariant_time_derivative(nu, beta, angles.nu_dot(t), angles.beta_dot(t), chi);
  return (kI * d_inv - (h * inv - inv * h)).norm();
}

inline double invariant_residual(const EffectiveHamiltonian& heff, const AngleSchedule& angles,
                                 double t, double chi) {
  if (heff.size() != 3) throw std::invalid_argument("effective Hamiltonian must be 3x3");
  return invariant_residual(Matrix3(heff.matrix(t)), angles, t, chi);
}

/// Coefficients (C0, C+, C-) of a state in the instantaneous invariant eigenbasis.
inline Vector3 dynamical_expansion(const Vector3& state, double nu, double beta) {
  const InvariantEigenstates e = invariant_eigenstates(nu, beta);
  return {e.zero.dot(state), e.plus.dot(state), e.minus.dot(state)};
}

/// Evaluates sum_n C_n e^{i alpha_n} |Phi_n(nu, beta_end)> for a state given at
/// (nu, beta_start), with the mode-0 phase zero.
inline Vector3 invariant_mode_state(const Vector3& initial, double nu, double beta_start,
                                    double beta_end, const PhaseRecord& phases) {
  const Vector3 c = dynamical_expansion(initial, nu, beta_start);
  const InvariantEigenstates e = invariant_eigenstates(nu, beta_end);
  return c(0) * e.zero + c(1) * std::exp(kI * phases.alpha_plus) * e.plus +
         c(2) * std::exp(kI * phases.alpha_minus) * e.minus;
}

/// Final state of the |phi1> transfer, in closed form:
///   c_phi1 = -sin(eps) sin(alpha)
///   c_mu   = i sin(eps) cos(eps) (cos(alpha) - 1)
///   c_phi5 = -(cos^2(eps) + sin^2(eps) cos(alpha)),   alpha = pi / (2 sin(eps)).
inline Vector3 closed_form_final_state(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("epsilon must lie in (0, pi/2)");
  }
  const double se = std::sin(epsilon), ce = std::cos(epsilon);
  const double alpha = std::numbers::pi / (2.0 * se);
  Vector3 v;
  v << -se * std::sin(alpha), kI * se * ce * (std::cos(alpha) - 1.0),
      -(ce * ce + se * se * std::cos(alpha));
  return v;
}

/// Lewis-Riesenfeld phases alpha_n(T) = int_0^T <Phi_n| i d/dt - H |Phi_n> dt by
/// composite Simpson quadrature along the effective dynamics.
inline PhaseRecord lr_phase_quadrature(const EffectiveHamiltonian& heff,
                                       const AngleSchedule& angles, double duration,
                                       int intervals = 2000) {
  if (intervals % 2) ++intervals;
  const double h = duration / intervals;
  std::array<double, 3> sums{};
  for (int k = 0; k <= intervals; ++k) {
    const double t = k * h;
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double nu = angles.nu(t), beta = angles.beta(t);
    const auto e = invariant_eigenstates(nu, beta);
    const auto d = invariant_eigenstate_derivatives(nu, beta, angles.nu_dot(t), angles.beta_dot(t));
    const Matrix3 ham = heff.matrix(t);
    for (int n = 0; n < 3; ++n) {
      const Complex value = e[n].dot(Vector3(kI * d[n] - ham * e[n]));
      sums[static_cast<std::size_t>(n)] += w * value.real();
    }
  }
  return {sums[1] * h / 3.0, sums[2] * h / 3.0};
}

/// Signs of <mu|H_eff|phi1> and <mu|H_eff|phi5> realized by the dark-state
/// projection, probed at mid-transfer where both legs are on.
inline std::pair<double, double> realized_dark_signs(const EffectiveHamiltonian& heff) {
  const Matrix3 m = heff.matrix(0.5 * heff.pulses().t_f);
  auto sign = [](Complex z) { return z.real() >= 0.0 ? 1.0 : -1.0; };
  return {sign(m(effective_index::mu, effective_index::phi1)),
          sign(m(effective_index::mu, effective_index::phi5))};
}

/// Copy of `config` whose step-1 laser phases make both dark-state couplings
/// positive, i.e. H_eff = (|mu>(Omega_i <phi1| + Omega_t <phi5|) + h.c.) / sqrt(2).
inline ProtocolConfig with_positive_dark_couplings(const ProtocolConfig& config) {
  const StepHamiltonian h = build_step_hamiltonian(1, config);
  const auto [s1, s5] = realized_dark_signs(dark_hamiltonian(h, {AtomLevel::g0, AtomLevel::g1, 0}));
  ProtocolConfig out = config;
  out.signs[0].initial *= s1;
  out.signs[0].target *= s5;
  return out;
}

/// Step-1 dark-subspace Hamiltonian of the |01>|0> manifold, basis (phi1, mu, phi5).
inline EffectiveHamiltonian step1_effective_hamiltonian(const ProtocolConfig& config) {
  return dark_hamiltonian(build_step_hamiltonian(1, config), {AtomLevel::g0, AtomLevel::g1, 0});
}

/// Propagates |phi1> under the step-1 effective Hamiltonian over [0, t_f] (RK4).
inline Vector3 effective_transfer(const ProtocolConfig& config) {
  const EffectiveHamiltonian heff = step1_effective_hamiltonian(config);
  const TimeGrid grid{0.0, config.t_f, config.dt, config.steps_per_pulse()};
  Eigen::VectorXcd phi1 = Eigen::VectorXcd::Zero(3);
  phi1(effective_index::phi1) = 1.0;
  return Vector3(schrodinger_evolve(heff, phi1, grid).final_state());
}

}  // namespace qzdswap
