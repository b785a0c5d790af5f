#pragma once

// Verification suites: each returns measured values against fixed thresholds.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "invariant.hpp"
#include "protocol.hpp"
#include "pulses.hpp"
#include "zeno.hpp"

namespace qzdswap {

struct CheckLine {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", "<=", ">=", ...
  bool passed = false;
};

inline CheckLine check_below(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, "<", measured < threshold};
}
inline CheckLine check_at_least(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, ">=", measured >= threshold};
}
inline CheckLine check_at_most(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, "<=", measured <= threshold};
}

inline void print_checks(std::ostream& out, const std::vector<CheckLine>& lines) {
  for (const auto& l : lines) {
    out << (l.passed ? "  [PASS] " : "  [FAIL] ") << l.name << ": " << format_number(l.measured)
        << ' ' << l.relation << ' ' << format_number(l.threshold) << '\n';
  }
}

inline bool all_passed(const std::vector<CheckLine>& lines) {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

/// Angle-equation residuals of the inverse-engineered pulses on a uniform grid.
inline std::vector<CheckLine> check_odes(const ProtocolConfig& c, int points = 1001) {
  const AngleSchedule angles = protocol_angles(c.epsilon, c.t_f);
  const PulseSchedule pulses = protocol_pulses(c.epsilon, c.t_f, kZenoAmplitudeFactor);
  double r_nu = 0.0, r_beta = 0.0, mismatch = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = c.t_f * k / (points - 1);
    const auto r = angle_ode_residual(angles, pulses, t);
    r_nu = std::max(r_nu, std::abs(r.nu));
    r_beta = std::max(r_beta, std::abs(r.beta));
    const auto [wi, wt] = inverse_engineer(angles, t);
    mismatch = std::max({mismatch, std::abs(wi - pulses.omega_initial_leg(t)),
                         std::abs(wt - pulses.omega_target_leg(t))});
  }
  return {check_below("max |nu residual|", r_nu, 1e-12),
          check_below("max |beta residual|", r_beta, 1e-12),
          check_below("max |inverse-engineered - protocol pulse|", mismatch, 1e-12)};
}

/// Invariant spectrum and equation residual, phases, and the closed-form final state.
inline std::vector<CheckLine> check_invariant(const ProtocolConfig& c, int points = 1000) {
  std::vector<CheckLine> out;
  const ProtocolConfig positive = with_positive_dark_couplings(c);
  const EffectiveHamiltonian heff = step1_effective_hamiltonian(positive);
  const AngleSchedule angles = protocol_angles(c.epsilon, c.t_f);

  double spectrum_error = 0.0, residual = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = c.t_f * k / (points - 1);
    const Matrix3 inv = build_invariant(angles.nu(t), angles.beta(t), c.chi).matrix;
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(inv, Eigen::EigenvaluesOnly);
    const double s = c.chi / std::numbers::sqrt2;
    const Eigen::Vector3d expected(-s, 0.0, s);
    spectrum_error = std::max(spectrum_error, (solver.eigenvalues() - expected).cwiseAbs().maxCoeff());
    residual = std::max(residual, invariant_residual(heff, angles, t, c.chi));
  }
  out.push_back(check_below("invariant spectrum deviation from {0, +-chi/sqrt2}", spectrum_error,
                            1e-12 * std::max(1.0, c.chi)));
  out.push_back(check_below("max ||i dI/dt - [H_eff, I]|| / chi", residual / c.chi, 1e-10));

  const PhaseRecord closed = lr_phase(c.epsilon);
  const PhaseRecord quad = lr_phase_quadrature(heff, angles, c.t_f);
  out.push_back(check_below("|alpha_+ quadrature - closed form|",
                            std::abs(quad.alpha_plus - closed.alpha_plus), 1e-6));
  out.push_back(check_below("|alpha_- quadrature - closed form|",
                            std::abs(quad.alpha_minus - closed.alpha_minus), 1e-6));

  const Vector3 propagated = effective_transfer(positive);
  const Vector3 formula = closed_form_final_state(c.epsilon);
  const char* names[] = {"c_phi1", "c_mu", "c_phi5"};
  for (int i = 0; i < 3; ++i) {
    out.push_back(check_below(std::string("|propagated - closed form| ") + names[i],
                              std::abs(propagated(i) - formula(i)), 1e-4));
  }
  out.push_back(check_below("| |c_phi5|^2 propagated - closed form |",
                            std::abs(std::norm(propagated(2)) - std::norm(formula(2))), 1e-5));
  return out;
}

/// Full-vs-effective error of step 1 from |01>|0> over increasing cavity coupling.
inline std::vector<CheckLine> check_zeno(const ProtocolConfig& c,
                                         const std::vector<double>& couplings = {5.0, 10.0, 20.0,
                                                                                 50.0}) {
  std::vector<CheckLine> out;
  double previous = 0.0;
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const double err = zeno_error(c, 1, transfer_source(1), couplings[i]);
    const std::string name = "zeno error at g = " + format_number(couplings[i]);
    if (i == 0) {
      out.push_back(check_at_most(name, err, 0.15));
    } else {
      out.push_back(check_below(name + " (strictly below previous)", err, previous));
    }
    previous = err;
  }
  return out;
}

inline double max_abs_difference(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Sign calibration and closed-system gate quality.
inline std::vector<CheckLine> check_gate(const ProtocolConfig& c, std::ostream& log) {
  const SignCalibration cal = rank_sign_patterns(c);
  for (int k = 0; k < 8; ++k) {
    log << "  pattern " << k << " [" << sign_pattern_label(sign_pattern(k))
        << "] gate fidelity " << format_number(cal.fidelities[static_cast<std::size_t>(k)]) << '\n';
  }
  log << "  calibrated pattern: " << cal.pattern << " [" << sign_pattern_label(cal.signs) << "]\n";
  ProtocolConfig best = c;
  best.signs = cal.signs;
  const GateResult gate = extract_gate(best);
  return {check_at_least("calibrated gate fidelity", gate.gate_fidelity, 0.99),
          check_at_most("max |G - SWAP|", max_abs_difference(gate.matrix, swap_matrix()), 0.05)};
}

/// dt-halving and Fock-truncation convergence of the protocol fidelity.
inline std::vector<CheckLine> check_convergence(const ProtocolConfig& c) {
  ProtocolConfig fine = c;
  fine.dt = c.dt / 2.0;
  const double f_coarse = run_protocol(c).fidelity;
  const double f_fine = run_protocol(fine).fidelity;

  ProtocolConfig closed = c;
  closed.noise = NoiseModel{};
  ProtocolConfig wider = closed;
  wider.n_max = closed.n_max + 1;
  const double g1 = extract_gate(closed).gate_fidelity;
  const double g2 = extract_gate(wider).gate_fidelity;
  return {check_below("|F(dt) - F(dt/2)|", std::abs(f_coarse - f_fine), 1e-6),
          check_below("|gate F(n_max) - gate F(n_max + 1)|", std::abs(g1 - g2), 1e-8)};
}

}  // namespace qzdswap
