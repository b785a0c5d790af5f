#pragma once

// Zeno decomposition H(t) = H_obs(t) + H_meas with H_meas the strong cavity
// coupling. In the strong-coupling limit each eigenprojection P_n of H_meas
// evolves independently under P_n H_obs P_n.

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "config.hpp"
#include "dynamics.hpp"
#include "hilbert.hpp"

namespace qzdswap {

/// States reachable from `initial` through any term of the step Hamiltonian,
/// breadth-first, each layer ordered by basis index.
inline std::vector<BasisState> reachable_subspace(const BasisState& initial, int step,
                                                  const SpaceDescriptor& space) {
  if (initial.photons != 0) {
    throw std::invalid_argument("reachable_subspace expects a vacuum-cavity initial state");
  }
  PulseSchedule unit;
  unit.peak = 1.0;
  const StepHamiltonian h(step, space, 1.0, unit);
  Operator coupling = h.cavity();
  coupling += h.leg_operator(Leg::initial);
  coupling += h.leg_operator(Leg::target);

  std::vector<BasisState> order;
  std::set<int> seen;
  std::vector<int> layer{basis_index(initial, space)};
  seen.insert(layer.front());
  while (!layer.empty()) {
    std::vector<int> next;
    for (int col : layer) {
      order.push_back(basis_state(col, space));
      for (Operator::InnerIterator it(coupling, col); it; ++it) {
        if (std::abs(it.value()) == 0.0) continue;
        const int row = static_cast<int>(it.row());
        if (seen.insert(row).second) next.push_back(row);
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  return order;
}

/// dim x k matrix whose columns are the subspace basis vectors.
inline DenseOperator subspace_embedding(const std::vector<BasisState>& subspace,
                                        const SpaceDescriptor& space) {
  DenseOperator e = DenseOperator::Zero(space.dim(), static_cast<Eigen::Index>(subspace.size()));
  for (std::size_t j = 0; j < subspace.size(); ++j) {
    e(basis_index(subspace[j], space), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return e;
}

struct ZenoDecomposition {
  std::vector<BasisState> subspace;
  DenseOperator embedding;                 ///< dim x k
  std::vector<double> eigenvalues;         ///< distinct, ascending
  std::vector<DenseOperator> projectors;   ///< k x k, subspace coordinates

  Eigen::Index size() const { return embedding.cols(); }

  std::size_t index_of(double eigenvalue, double tol = 1e-9) const {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      if (std::abs(eigenvalues[i] - eigenvalue) <= tol) return i;
    }
    throw std::invalid_argument("eigenvalue " + format_number(eigenvalue) +
                                " not present in the decomposition");
  }

  /// Projector embedded in the full composite space.
  DenseOperator full_projector(std::size_t i) const {
    return embedding * projectors.at(i) * embedding.adjoint();
  }
};

/// Eigenprojections of H_meas restricted to `subspace`. Eigenvalues closer
/// than 1e-9 * coupling_scale are merged; coupling_scale defaults to the
/// largest matrix element magnitude.
inline ZenoDecomposition zeno_decompose(const Operator& h_meas,
                                        const std::vector<BasisState>& subspace,
                                        const SpaceDescriptor& space, double coupling_scale = 0.0) {
  ZenoDecomposition dec;
  dec.subspace = subspace;
  dec.embedding = subspace_embedding(subspace, space);
  const DenseOperator local = dec.embedding.adjoint() * (h_meas * dec.embedding);
  const double largest = local.size() ? local.cwiseAbs().maxCoeff() : 0.0;
  if (coupling_scale <= 0.0) coupling_scale = largest > 0.0 ? largest : 1.0;
  if ((local - local.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * coupling_scale) {
    throw std::invalid_argument("H_meas is not Hermitian on the subspace");
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(local);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const double tol = 1e-9 * coupling_scale;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const DenseOperator outer = vectors.col(i) * vectors.col(i).adjoint();
    if (!dec.eigenvalues.empty() && std::abs(values(i) - dec.eigenvalues.back()) <= tol) {
      dec.projectors.back() += outer;
    } else {
      dec.eigenvalues.push_back(values(i));
      dec.projectors.push_back(outer);
    }
  }
  // Exact zeros print as zeros.
  for (double& v : dec.eigenvalues) {
    if (std::abs(v) <= tol) v = 0.0;
  }
  return dec;
}

/// Orthonormal basis of the range of P (subspace coordinates): Gram-Schmidt
/// over P e_1, P e_2, ... in subspace order, each vector phased so that its
/// last significant component is real and positive.
inline DenseOperator projector_basis(const DenseOperator& projector) {
  const Eigen::Index k = projector.rows();
  std::vector<Eigen::VectorXcd> basis;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXcd v = projector.col(j);
    for (const auto& b : basis) v -= b.dot(v) * b;
    const double n = v.norm();
    if (n < 1e-8) continue;
    v /= n;
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      if (std::abs(v(i)) > 1e-10) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    basis.push_back(v);
  }
  DenseOperator out(k, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = basis[j];
  return out;
}

/// P H_obs(t) P restricted to one eigenspace of H_meas, expressed in an
/// orthonormal basis of that eigenspace.
class EffectiveHamiltonian {
 public:
  EffectiveHamiltonian(const StepHamiltonian& h, const ZenoDecomposition& dec, std::size_t which)
      : pulses_(h.pulses()), eigenvalue_(dec.eigenvalues.at(which)) {
    basis_ = dec.embedding * projector_basis(dec.projectors.at(which));
    const DenseOperator left = basis_.adjoint();
    initial_ = left * (h.leg_operator(Leg::initial) * basis_);
    target_ = left * (h.leg_operator(Leg::target) * basis_);
  }

  /// dim x m; columns are the eigenspace basis vectors in the full space.
  const DenseOperator& basis() const { return basis_; }
  Eigen::Index size() const { return basis_.cols(); }
  double eigenvalue() const { return eigenvalue_; }
  const PulseSchedule& pulses() const { return pulses_; }

  DenseOperator matrix(double t) const {
    return pulses_.omega_initial_leg(t) * initial_ + pulses_.omega_target_leg(t) * target_;
  }

  template <class Dense>
  Dense apply(double t, const Dense& x) const {
    return Dense(matrix(t) * x);
  }

  StateVector embed(const Eigen::VectorXcd& coefficients) const { return basis_ * coefficients; }
  Eigen::VectorXcd restrict(const StateVector& full) const { return basis_.adjoint() * full; }

 private:
  PulseSchedule pulses_;
  double eigenvalue_;
  DenseOperator basis_;
  DenseOperator initial_;
  DenseOperator target_;
};

inline EffectiveHamiltonian effective_hamiltonian(const StepHamiltonian& h,
                                                  const ZenoDecomposition& dec,
                                                  double select_eigenvalue) {
  const double scale = dec.eigenvalues.empty()
                           ? 1.0
                           : std::max(1.0, std::abs(dec.eigenvalues.front()) +
                                               std::abs(dec.eigenvalues.back()));
  return EffectiveHamiltonian(h, dec, dec.index_of(select_eigenvalue, 1e-9 * scale));
}

/// Dark-subspace (lambda = 0) effective Hamiltonian of the manifold reachable from `initial`.
inline EffectiveHamiltonian dark_hamiltonian(const StepHamiltonian& h, const BasisState& initial) {
  const auto subspace = reachable_subspace(initial, h.step(), h.space());
  return effective_hamiltonian(h, zeno_decompose(h.cavity(), subspace, h.space(), h.g()), 0.0);
}

/// Strong-coupling-limit propagator exp[-i t sum_n (lambda_n P_n + P_n H_obs P_n)]
/// composed over piecewise-constant intervals (midpoint sampling of H_obs), in
/// subspace coordinates.
inline DenseOperator zeno_limit_propagator(const StepHamiltonian& h, const ZenoDecomposition& dec,
                                           double duration, int intervals) {
  const Eigen::Index k = dec.size();
  const double dt = duration / intervals;
  DenseOperator u = DenseOperator::Identity(k, k);
  for (int n = 0; n < intervals; ++n) {
    const double t = (n + 0.5) * dt;
    const DenseOperator obs = dec.embedding.adjoint() * (h.laser_part(t) * dec.embedding);
    DenseOperator gen = DenseOperator::Zero(k, k);
    for (std::size_t j = 0; j < dec.eigenvalues.size(); ++j) {
      const DenseOperator& p = dec.projectors[j];
      gen += dec.eigenvalues[j] * p + p * obs * p;
    }
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(0.5 * (gen + gen.adjoint()));
    const Eigen::VectorXcd phases =
        (-kI * dt * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
    u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint() * u;
  }
  return u;
}

/// ||psi_full(t_f) - psi_eff(t_f)|| for one protocol step started from a basis
/// state, with the cavity coupling set to `g`. Closed system.
inline double zeno_error(const ProtocolConfig& config, int step, const BasisState& initial,
                         double g) {
  ProtocolConfig cfg = config;
  cfg.g = g;
  const StepHamiltonian h = build_step_hamiltonian(step, cfg);
  const SpaceDescriptor space = cfg.space();
  const TimeGrid grid{0.0, cfg.t_f, cfg.dt, cfg.steps_per_pulse()};
  const StateVector psi0 = basis_vector(initial, space);
  const StateVector full = schrodinger_evolve(h, psi0, grid).final_state();

  const EffectiveHamiltonian heff = dark_hamiltonian(h, initial);
  const Eigen::VectorXcd c0 = heff.restrict(psi0);
  if (c0.norm() < 1e-12) return full.norm();
  const Eigen::VectorXcd c1 = schrodinger_evolve(heff, Eigen::VectorXcd(c0 / c0.norm()), grid)
                                  .final_state();
  return (full - heff.embed(c1 * c0.norm())).norm();
}

/// Largest population outside the dark subspace along a trajectory.
inline double dark_leakage(const PureTrajectory& traj, const EffectiveHamiltonian& dark) {
  double worst = 0.0;
  for (const auto& psi : traj.states) {
    worst = std::max(worst, psi.squaredNorm() - dark.restrict(psi).squaredNorm());
  }
  return worst;
}

}  // namespace qzdswap
