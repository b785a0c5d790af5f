#pragma once

// Three-step SWAP protocol: step k acts during [(k-1) t_f, k t_f] with its
// own pulse pair; Hamiltonians switch instantaneously at step boundaries.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "dynamics.hpp"
#include "hilbert.hpp"
#include "zeno.hpp"

namespace qzdswap {

/// Computational basis |00>, |01>, |10>, |11> (atoms A, B) with the cavity in vacuum.
inline const std::array<BasisState, 4> kQubitBasis{
    BasisState{AtomLevel::g0, AtomLevel::g0, 0}, BasisState{AtomLevel::g0, AtomLevel::g1, 0},
    BasisState{AtomLevel::g1, AtomLevel::g0, 0}, BasisState{AtomLevel::g1, AtomLevel::g1, 0}};

inline StateVector qubit_state(const std::array<Complex, 4>& amplitudes,
                               const SpaceDescriptor& space) {
  StateVector psi = StateVector::Zero(space.dim());
  for (std::size_t i = 0; i < 4; ++i) psi(basis_index(kQubitBasis[i], space)) = amplitudes[i];
  return psi;
}

/// Initial state of the transfer driven in each step.
inline BasisState transfer_source(int step) {
  switch (step) {
    case 1: return {AtomLevel::g0, AtomLevel::g1, 0};
    case 2: return {AtomLevel::g1, AtomLevel::g0, 0};
    case 3: return {AtomLevel::g1, AtomLevel::ga, 0};
    default: throw std::out_of_range("step must be 1, 2 or 3");
  }
}

/// Sign s in |source> -> s |target> delivered by one step under the configured
/// laser phases. The transfer runs along source - m - target in the dark
/// manifold; a chain with both couplings positive ends in -|target>, and
/// each negative coupling flips that sign.
inline double transfer_sign(const ProtocolConfig& config, int step) {
  const StepHamiltonian h = build_step_hamiltonian(step, config);
  const EffectiveHamiltonian dark = dark_hamiltonian(h, transfer_source(step));
  if (dark.size() != 3) throw std::logic_error("transfer manifold is not three-dimensional");
  const DenseOperator m = dark.matrix(0.5 * config.t_f);
  auto sign = [](Complex z) { return z.real() >= 0.0 ? 1.0 : -1.0; };
  return -sign(m(1, 0)) * sign(m(1, 2));
}

/// Ideal states after each step (0..3). Steps 1 and 2 carry the transfer
/// signs realized by the configured laser phases; the final state is the
/// exact SWAP output.
inline std::array<StateVector, 4> ideal_states(const ProtocolConfig& config) {
  const SpaceDescriptor space = config.space();
  const auto& a = config.input_amplitudes;
  const double s1 = transfer_sign(config, 1);
  const double s2 = transfer_sign(config, 2);
  auto ket = [&](AtomLevel la, AtomLevel lb) { return basis_vector({la, lb, 0}, space); };
  using L = AtomLevel;
  std::array<StateVector, 4> out;
  out[0] = qubit_state(a, space);
  out[1] = a[0] * ket(L::g0, L::g0) + s1 * a[1] * ket(L::g1, L::ga) + a[2] * ket(L::g1, L::g0) +
           a[3] * ket(L::g1, L::g1);
  out[2] = a[0] * ket(L::g0, L::g0) + s1 * a[1] * ket(L::g1, L::ga) +
           s2 * a[2] * ket(L::ga, L::g1) + a[3] * ket(L::g1, L::g1);
  out[3] = qubit_state({a[0], a[2], a[1], a[3]}, space);
  return out;
}

inline double state_fidelity(const StateVector& ideal, const StateVector& psi) {
  return std::norm(ideal.dot(psi));
}

inline double state_fidelity(const StateVector& ideal, const DenseOperator& rho) {
  return ideal.dot(rho * ideal).real();
}

// ---------------------------------------------------------------------------
// Propagation through all three steps

namespace detail {

template <class State>
void append(Trajectory<State>& all, Trajectory<State>&& part) {
  const std::size_t skip = all.times.empty() ? 0 : 1;
  all.times.insert(all.times.end(), part.times.begin() + static_cast<long>(skip), part.times.end());
  all.states.insert(all.states.end(), std::make_move_iterator(part.states.begin() + static_cast<long>(skip)),
                    std::make_move_iterator(part.states.end()));
}

inline TimeGrid step_grid(const ProtocolConfig& config, int step) {
  return {(step - 1) * config.t_f, config.t_f, config.dt, config.sample_every};
}

}  // namespace detail

inline PureTrajectory propagate_closed(const ProtocolConfig& config, const StateVector& psi0) {
  config.validate();
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-8) {
    throw std::invalid_argument("initial state is not normalized");
  }
  PureTrajectory all;
  StateVector psi = psi0;
  for (int step = 1; step <= 3; ++step) {
    auto part = detail::schrodinger_integrate(build_step_hamiltonian(step, config), psi,
                                              detail::step_grid(config, step));
    psi = part.final_state();
    detail::append(all, std::move(part));
  }
  return all;
}

inline MixedTrajectory propagate_open(const ProtocolConfig& config, const DenseOperator& rho0) {
  config.validate();
  validate_density_matrix(rho0);
  const Dissipator dissipator(config.space(), config.noise);
  MixedTrajectory all;
  DenseOperator rho = rho0;
  for (int step = 1; step <= 3; ++step) {
    auto part = detail::lindblad_integrate(build_step_hamiltonian(step, config), rho, dissipator,
                                           detail::step_grid(config, step));
    rho = part.final_state();
    detail::append(all, std::move(part));
  }
  return all;
}

enum class Evolution { automatic, closed, open };

struct ProtocolResult {
  bool open = false;
  double fidelity = 0.0;
  StateVector final_state;    ///< closed runs
  DenseOperator final_rho;    ///< open runs; |psi><psi| for closed runs
};

/// Propagates Psi_0 (or |Psi_0><Psi_0|) through the three steps and scores the
/// result against the exact SWAP output. `automatic` picks the master equation
/// whenever a decay rate is nonzero.
inline ProtocolResult run_protocol(const ProtocolConfig& config,
                                   Evolution mode = Evolution::automatic) {
  config.validate();
  const StateVector psi0 = qubit_state(config.input_amplitudes, config.space());
  const StateVector ideal = ideal_states(config)[3];
  ProtocolResult result;
  result.open = mode == Evolution::open || (mode == Evolution::automatic && !config.noise.closed());
  if (result.open) {
    ProtocolConfig cfg = config;
    cfg.sample_every = cfg.steps_per_pulse();
    result.final_rho = propagate_open(cfg, density_matrix(psi0)).final_state();
    result.fidelity = state_fidelity(ideal, result.final_rho);
  } else {
    ProtocolConfig cfg = config;
    cfg.sample_every = cfg.steps_per_pulse();
    result.final_state = propagate_closed(cfg, psi0).final_state();
    result.final_rho = density_matrix(result.final_state);
    result.fidelity = state_fidelity(ideal, result.final_state);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Gate extraction and laser-phase calibration

struct GateResult {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
  double gate_fidelity = 0.0;
  std::array<double, 4> leakage{};
};

inline const Eigen::Matrix4cd& swap_matrix() {
  static const Eigen::Matrix4cd swap = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
  }();
  return swap;
}

inline double gate_fidelity(const Eigen::Matrix4cd& gate) {
  return std::norm((swap_matrix().adjoint() * gate).trace() / 4.0);
}

/// Closed-system propagation of the four computational inputs; column j holds
/// the qubit-vacuum components of the output for input j.
inline GateResult extract_gate(const ProtocolConfig& config) {
  ProtocolConfig cfg = config;
  cfg.sample_every = cfg.steps_per_pulse();
  const SpaceDescriptor space = cfg.space();
  GateResult gate;
  for (int j = 0; j < 4; ++j) {
    const StateVector out =
        propagate_closed(cfg, basis_vector(kQubitBasis[static_cast<std::size_t>(j)], space))
            .final_state();
    for (int i = 0; i < 4; ++i) {
      gate.matrix(i, j) = out(basis_index(kQubitBasis[static_cast<std::size_t>(i)], space));
    }
    gate.leakage[static_cast<std::size_t>(j)] = 1.0 - gate.matrix.col(j).squaredNorm();
  }
  gate.gate_fidelity = gate_fidelity(gate.matrix);
  return gate;
}

struct SignCalibration {
  int pattern = 0;
  SignConfig signs{};
  std::array<double, 8> fidelities{};
  double best() const { return fidelities[static_cast<std::size_t>(pattern)]; }
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, SignCalibration result)
      : std::runtime_error(what), result_(std::move(result)) {}
  const SignCalibration& result() const { return result_; }

 private:
  SignCalibration result_;
};

/// Closed-system gate fidelity for each of the eight relative-phase patterns;
/// best pattern with ties (within 1e-9) resolved to the lowest index.
inline SignCalibration rank_sign_patterns(const ProtocolConfig& config) {
  SignCalibration cal;
  ProtocolConfig cfg = config;
  cfg.noise = NoiseModel{};
  for (int k = 0; k < 8; ++k) {
    cfg.signs = sign_pattern(k);
    cal.fidelities[static_cast<std::size_t>(k)] = extract_gate(cfg).gate_fidelity;
  }
  const double best = *std::max_element(cal.fidelities.begin(), cal.fidelities.end());
  for (int k = 0; k < 8; ++k) {
    if (cal.fidelities[static_cast<std::size_t>(k)] >= best - 1e-9) {
      cal.pattern = k;
      break;
    }
  }
  cal.signs = sign_pattern(cal.pattern);
  return cal;
}

inline SignCalibration calibrate_signs(const ProtocolConfig& config) {
  SignCalibration cal = rank_sign_patterns(config);
  if (cal.best() < 0.99) {
    std::string msg = "sign calibration failed: best closed-system gate fidelity " +
                      format_number(cal.best()) + " < 0.99; pattern fidelities:";
    for (int k = 0; k < 8; ++k) {
      msg += " [" + sign_pattern_label(sign_pattern(k)) + "] " +
             format_number(cal.fidelities[static_cast<std::size_t>(k)]);
    }
    throw CalibrationError(msg, cal);
  }
  return cal;
}

// ---------------------------------------------------------------------------
// Noise sweeps

struct SweepPoint {
  double kappa = 0.0;
  double gamma = 0.0;
  double fidelity = 0.0;
  Branching branching = Branching::per_channel;
};

/// Fidelity grid, rows ordered by kappa then gamma as given. Points run on
/// `threads` workers (0 = hardware concurrency); each owns its state.
inline std::vector<SweepPoint> sweep(const ProtocolConfig& config,
                                     const std::vector<double>& gamma_values,
                                     const std::vector<double>& kappa_values,
                                     unsigned threads = 0) {
  if (gamma_values.empty() || kappa_values.empty()) {
    throw std::invalid_argument("sweep needs at least one gamma and one kappa value");
  }
  std::vector<SweepPoint> points;
  for (double kappa : kappa_values) {
    for (double gamma : gamma_values) points.push_back({kappa, gamma, 0.0, config.noise.branching});
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(points.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        ProtocolConfig cfg = config;
        cfg.noise.kappa = points[i].kappa;
        cfg.noise.gamma = points[i].gamma;
        points[i].fidelity = run_protocol(cfg, Evolution::open).fidelity;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw IntegrationError(e);
  }
  return points;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                            const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "kappa,gamma,fidelity,branching\n";
  for (const auto& p : points) {
    out << format_number(p.kappa) << ',' << format_number(p.gamma) << ','
        << format_number(p.fidelity) << ',' << to_string(p.branching) << '\n';
  }
}

}  // namespace qzdswap
