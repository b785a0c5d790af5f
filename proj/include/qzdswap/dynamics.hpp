#pragma once

// Full-space step Hamiltonians and propagation of pure states (Schrodinger)
// and density matrices (Lindblad) in the interaction picture.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "config.hpp"
#include "hilbert.hpp"
#include "integrator.hpp"
#include "pulses.hpp"

namespace qzdswap {

enum class Leg { initial, target };

/// One resonant laser coupling |upper><lower| + h.c. on a single atom.
struct LaserTerm {
  Atom atom;
  AtomLevel lower;
  AtomLevel upper;
  Leg leg;
  double sign;
  Operator coupling;
};

/// H(t) = g * sum_atoms (a |e><1| + h.c.) + sum_lasers sign * Omega_leg(t) * (|upper><lower| + h.c.)
class StepHamiltonian {
 public:
  StepHamiltonian(int step, const SpaceDescriptor& space, double g, const PulseSchedule& pulses)
      : step_(step), space_(space), g_(g), pulses_(pulses) {
    if (step < 1 || step > 3) throw std::out_of_range("step must be 1, 2 or 3");
    const Operator a = annihilation(space);
    cavity_ = Operator(space.dim(), space.dim());
    for (Atom atom : {Atom::A, Atom::B}) {
      const Operator down = a * atomic_operator(atom, AtomLevel::ee, AtomLevel::g1, space);
      cavity_ += g * (down + adjoint(down));
    }
    switch (step) {
      case 1:
        add_laser(Atom::A, AtomLevel::g0, AtomLevel::ee, Leg::initial);
        add_laser(Atom::B, AtomLevel::ga, AtomLevel::ee, Leg::target);
        break;
      case 2:
        add_laser(Atom::B, AtomLevel::g0, AtomLevel::ee, Leg::initial);
        add_laser(Atom::A, AtomLevel::ga, AtomLevel::ee, Leg::target);
        break;
      default:
        for (Atom atom : {Atom::A, Atom::B}) {
          add_laser(atom, AtomLevel::ga, AtomLevel::uu, Leg::initial);
          add_laser(atom, AtomLevel::g0, AtomLevel::uu, Leg::target);
        }
        break;
    }
    initial_sum_ = Operator(space.dim(), space.dim());
    target_sum_ = Operator(space.dim(), space.dim());
    for (const auto& term : lasers_) {
      (term.leg == Leg::initial ? initial_sum_ : target_sum_) += term.sign * term.coupling;
    }
  }

  int step() const { return step_; }
  double g() const { return g_; }
  const SpaceDescriptor& space() const { return space_; }
  const PulseSchedule& pulses() const { return pulses_; }
  const std::vector<LaserTerm>& lasers() const { return lasers_; }

  /// Strong cavity coupling, the "measurement" part of the Zeno decomposition.
  const Operator& cavity() const { return cavity_; }

  double envelope(Leg leg, double t) const {
    return leg == Leg::initial ? pulses_.omega_initial_leg(t) : pulses_.omega_target_leg(t);
  }

  /// Sum of sign * (|upper><lower| + h.c.) over the lasers sharing one envelope.
  const Operator& leg_operator(Leg leg) const {
    return leg == Leg::initial ? initial_sum_ : target_sum_;
  }

  /// Laser part H_obs(t).
  Operator laser_part(double t) const {
    return Operator(envelope(Leg::initial, t) * initial_sum_ + envelope(Leg::target, t) * target_sum_);
  }

  Operator evaluate(double t) const { return Operator(cavity_ + laser_part(t)); }

  template <class Dense>
  Dense apply(double t, const Dense& x) const {
    Dense out = cavity_ * x;
    out += envelope(Leg::initial, t) * (initial_sum_ * x);
    out += envelope(Leg::target, t) * (target_sum_ * x);
    return out;
  }

 private:
  void add_laser(Atom atom, AtomLevel lower, AtomLevel upper, Leg leg) {
    const double sign = leg == Leg::initial ? pulses_.sign_initial : pulses_.sign_target;
    const Operator up = atomic_operator(atom, upper, lower, space_);
    lasers_.push_back({atom, lower, upper, leg, sign, Operator(up + adjoint(up))});
  }

  int step_;
  SpaceDescriptor space_;
  double g_;
  PulseSchedule pulses_;
  Operator cavity_;
  std::vector<LaserTerm> lasers_;
  Operator initial_sum_;
  Operator target_sum_;
};

inline StepHamiltonian build_step_hamiltonian(int step, const ProtocolConfig& config) {
  return StepHamiltonian(step, config.space(), config.g, config.pulses(step));
}

// ---------------------------------------------------------------------------
// Trajectories

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  const State& final_state() const { return states.back(); }
  std::size_t size() const { return times.size(); }
};

using PureTrajectory = Trajectory<StateVector>;
using MixedTrajectory = Trajectory<DenseOperator>;

inline double probability(const StateVector& psi, int index) { return std::norm(psi(index)); }
inline double probability(const DenseOperator& rho, int index) { return rho(index, index).real(); }

inline double state_trace(const StateVector& psi) { return psi.squaredNorm(); }
inline double state_trace(const DenseOperator& rho) { return rho.trace().real(); }

inline double purity(const StateVector& psi) { return psi.squaredNorm() * psi.squaredNorm(); }
inline double purity(const DenseOperator& rho) { return (rho * rho).trace().real(); }

inline DenseOperator density_matrix(const StateVector& psi) { return psi * psi.adjoint(); }

inline double min_eigenvalue(const DenseOperator& rho) {
  const DenseOperator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Trace distance 0.5 * ||rho - sigma||_1.
inline double trace_distance(const DenseOperator& rho, const DenseOperator& sigma) {
  const DenseOperator diff = rho - sigma;
  const DenseOperator herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

/// Per-sample populations of the requested basis states, columns in request order.
template <class State>
std::vector<std::vector<double>> populations(const Trajectory<State>& traj,
                                             const std::vector<BasisState>& labels,
                                             const SpaceDescriptor& space) {
  std::vector<int> indices;
  indices.reserve(labels.size());
  for (const auto& l : labels) indices.push_back(basis_index(l, space));
  std::vector<std::vector<double>> table;
  table.reserve(traj.size());
  for (const auto& s : traj.states) {
    std::vector<double> row;
    row.reserve(indices.size());
    for (int i : indices) row.push_back(probability(s, i));
    table.push_back(std::move(row));
  }
  return table;
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

/// CSV: optional "# <comment>" line, header `t,<labels...>,trace,purity`, one row per sample.
template <class State>
void write_trajectory_csv(std::ostream& out, const Trajectory<State>& traj,
                          const std::vector<BasisState>& labels, const SpaceDescriptor& space,
                          const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << 't';
  for (const auto& l : labels) out << ",P_" << l.label();
  out << ",trace,purity\n";
  const auto table = populations(traj, labels, space);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_number(traj.times[i]);
    for (double p : table[i]) out << ',' << format_number(p);
    out << ',' << format_number(state_trace(traj.states[i])) << ','
        << format_number(purity(traj.states[i])) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Propagation

namespace detail {

template <class State, class Rhs, class Check>
Trajectory<State> integrate(const Rhs& rhs, State y, const TimeGrid& grid, const Check& check) {
  const int steps = grid.steps();
  Trajectory<State> traj;
  traj.times.push_back(grid.start);
  traj.states.push_back(y);
  for (int n = 0; n < steps; ++n) {
    const double t = n * grid.dt;
    y = rk4_step(rhs, t, y, grid.dt);
    if ((n + 1) % grid.sample_every == 0 || n + 1 == steps) {
      check(y, grid.start + (n + 1) * grid.dt);
      traj.times.push_back(grid.start + (n + 1) * grid.dt);
      traj.states.push_back(y);
    }
  }
  return traj;
}

}  // namespace detail

namespace detail {

template <class Hamiltonian>
PureTrajectory schrodinger_integrate(const Hamiltonian& h, const StateVector& psi0,
                                     const TimeGrid& grid) {
  auto rhs = [&h](double t, const StateVector& psi) -> StateVector {
    return -kI * h.apply(t, psi);
  };
  auto check = [](const StateVector& psi, double t) {
    const double drift = std::abs(psi.squaredNorm() - 1.0);
    if (drift > 1e-4) {
      throw IntegrationError("norm drift " + format_number(drift) + " at t = " + format_number(t) +
                             " (step too large)");
    }
  };
  return integrate(rhs, psi0, grid, check);
}

}  // namespace detail

/// Generic time-dependent Hamiltonian: anything with `apply(t, x)`.
template <class Hamiltonian>
PureTrajectory schrodinger_evolve(const Hamiltonian& h, const StateVector& psi0,
                                  const TimeGrid& grid) {
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-8) {
    throw std::invalid_argument("initial state is not normalized");
  }
  return detail::schrodinger_integrate(h, psi0, grid);
}

/// Dissipative part of the master equation: rate * D[L] for each channel.
class Dissipator {
 public:
  struct Channel {
    double rate;
    Operator jump;
  };

  Dissipator() = default;

  Dissipator(const SpaceDescriptor& space, const NoiseModel& noise) {
    if (noise.kappa > 0.0) add(noise.kappa, annihilation(space));
    const double rate = noise.channel_rate();
    if (rate > 0.0) {
      for (Atom atom : {Atom::A, Atom::B}) {
        for (AtomLevel l : kExcitedLevels) {
          for (AtomLevel k : kGroundLevels) add(rate, atomic_operator(atom, k, l, space));
        }
      }
    }
  }

  void add(double rate, const Operator& jump) { channels_.push_back({rate, jump}); }

  const std::vector<Channel>& channels() const { return channels_; }

  /// sum_j rate_j L_j^dag L_j
  Operator decay(Eigen::Index dim) const {
    Operator k(dim, dim);
    for (const auto& c : channels_) k += c.rate * Operator(c.jump.adjoint() * c.jump);
    return k;
  }

 private:
  std::vector<Channel> channels_;
};

// Column-stacking superoperators: vec(A X B) = (B^T kron A) vec(X).
namespace superop {

inline Operator kron(const Operator& a, const Operator& b) {
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ca = 0; ca < a.outerSize(); ++ca) {
    for (Operator::InnerIterator ia(a, ca); ia; ++ia) {
      for (Eigen::Index cb = 0; cb < b.outerSize(); ++cb) {
        for (Operator::InnerIterator ib(b, cb); ib; ++ib) {
          entries.emplace_back(ia.row() * b.rows() + ib.row(), ca * b.cols() + cb,
                               ia.value() * ib.value());
        }
      }
    }
  }
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

/// X -> A X
inline Operator left(const Operator& a) {
  Operator id(a.rows(), a.rows());
  id.setIdentity();
  return kron(id, a);
}

/// X -> X B
inline Operator right(const Operator& b) {
  Operator id(b.cols(), b.cols());
  id.setIdentity();
  return kron(Operator(b.transpose()), id);
}

/// X -> -i [H, X]
inline Operator commutator(const Operator& h) {
  return Operator(-kI * (left(h) - right(h)));
}

/// X -> rate (L X L^dag - {L^dag L, X} / 2)
inline Operator dissipator(double rate, const Operator& jump) {
  const Operator ldl = jump.adjoint() * jump;
  return Operator(rate * (kron(Operator(jump.conjugate()), jump) - 0.5 * left(ldl) -
                          0.5 * right(ldl)));
}

}  // namespace superop

/// Lindblad generator of one protocol step, affine in the two pulse envelopes:
/// L(t) = L_0 + Omega_initial(t) L_initial + Omega_target(t) L_target.
class LindbladGenerator {
 public:
  LindbladGenerator(const StepHamiltonian& h, const Dissipator& dissipator) : pulses_(h.pulses()) {
    fixed_ = superop::commutator(h.cavity());
    for (const auto& c : dissipator.channels()) fixed_ += superop::dissipator(c.rate, c.jump);
    initial_ = superop::commutator(h.leg_operator(Leg::initial));
    target_ = superop::commutator(h.leg_operator(Leg::target));
  }

  Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& rho) const {
    Eigen::VectorXcd out = fixed_ * rho;
    out += pulses_.omega_initial_leg(t) * (initial_ * rho);
    out += pulses_.omega_target_leg(t) * (target_ * rho);
    return out;
  }

 private:
  PulseSchedule pulses_;
  Operator fixed_;
  Operator initial_;
  Operator target_;
};

inline void validate_density_matrix(const DenseOperator& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("initial density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
    throw std::invalid_argument("initial density matrix does not have unit trace");
  }
  if (min_eigenvalue(rho) < -1e-10) {
    throw std::invalid_argument("initial density matrix is not positive semidefinite");
  }
}

namespace detail {

inline MixedTrajectory lindblad_integrate(const StepHamiltonian& h, const DenseOperator& rho0,
                                          const Dissipator& dissipator, const TimeGrid& grid) {
  const Eigen::Index dim = rho0.rows();
  const LindbladGenerator generator(h, dissipator);
  auto rhs = [&generator](double t, const Eigen::VectorXcd& v) { return generator.apply(t, v); };
  auto trace_of = [dim](const Eigen::VectorXcd& v) {
    Complex tr = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) tr += v(i * dim + i);
    return tr.real();
  };
  auto check = [&trace_of](const Eigen::VectorXcd& v, double t) {
    const double drift = std::abs(trace_of(v) - 1.0);
    if (drift > 1e-4) {
      throw IntegrationError("trace drift " + format_number(drift) + " at t = " + format_number(t));
    }
  };
  const Eigen::VectorXcd v0 = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), dim * dim);
  const auto flat = integrate(rhs, v0, grid, check);
  MixedTrajectory traj;
  traj.times = flat.times;
  traj.states.reserve(flat.states.size());
  for (const auto& v : flat.states) {
    traj.states.push_back(Eigen::Map<const DenseOperator>(v.data(), dim, dim));
  }
  const double lowest = min_eigenvalue(traj.final_state());
  if (lowest < -1e-6) {
    throw IntegrationError("density matrix lost positivity: min eigenvalue " +
                           format_number(lowest));
  }
  return traj;
}

}  // namespace detail

/// d rho/dt = -i[H(t), rho] + sum_j rate_j (L_j rho L_j^dag - {L_j^dag L_j, rho}/2),
/// integrated with RK4 on vec(rho).
inline MixedTrajectory lindblad_evolve(const StepHamiltonian& h, const DenseOperator& rho0,
                                       const Dissipator& dissipator, const TimeGrid& grid) {
  validate_density_matrix(rho0);
  return detail::lindblad_integrate(h, rho0, dissipator, grid);
}

inline MixedTrajectory lindblad_evolve(const StepHamiltonian& h, const DenseOperator& rho0,
                                       const NoiseModel& noise, const TimeGrid& grid) {
  return lindblad_evolve(h, rho0, Dissipator(h.space(), noise), grid);
}

}  // namespace qzdswap
