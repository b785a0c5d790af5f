#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <qzdswap/protocol.hpp>
#include <qzdswap/zeno.hpp>

using namespace qzdswap;

namespace {

std::vector<std::string> labels(const std::vector<BasisState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(s.label());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Reachable, StepOneFromZeroOne) {
  const auto sub = reachable_subspace(BasisState::parse("01"), 1, SpaceDescriptor(1));
  EXPECT_EQ(sub.front().label(), "01_0");
  EXPECT_EQ(labels(sub), (std::vector<std::string>{"01_0", "11_1", "1a_0", "1e_0", "e1_0"}));
}

TEST(Reachable, DecoupledStatesStayAlone) {
  const SpaceDescriptor d(1);
  for (int step = 1; step <= 2; ++step) {
    EXPECT_EQ(reachable_subspace(BasisState::parse("11"), step, d).size(), 1u);
  }
  EXPECT_THROW(reachable_subspace(BasisState::parse("11_1"), 1, d), std::invalid_argument);
}

TEST(Reachable, ZeroZeroIsFrozenByTheCavity) {
  ProtocolConfig c;
  const StepHamiltonian h = build_step_hamiltonian(1, c);
  const auto sub = reachable_subspace(BasisState::parse("00"), 1, c.space());
  EXPECT_EQ(labels(sub), (std::vector<std::string>{"00_0", "10_1", "e0_0"}));
  const EffectiveHamiltonian dark = dark_hamiltonian(h, BasisState::parse("00"));
  ASSERT_EQ(dark.size(), 1);
  EXPECT_EQ(dark.matrix(10.0)(0, 0), Complex(0.0));
}

TEST(Decomposition, CavitySpectrumOnStepOneManifold) {
  ProtocolConfig c;
  const StepHamiltonian h = build_step_hamiltonian(1, c);
  const auto sub = reachable_subspace(BasisState::parse("01"), 1, c.space());
  const ZenoDecomposition dec = zeno_decompose(h.cavity(), sub, c.space(), c.g);
  ASSERT_EQ(dec.eigenvalues.size(), 3u);
  EXPECT_NEAR(dec.eigenvalues[0], -std::numbers::sqrt2 * c.g, 1e-12);
  EXPECT_EQ(dec.eigenvalues[1], 0.0);
  EXPECT_NEAR(dec.eigenvalues[2], std::numbers::sqrt2 * c.g, 1e-12);
  EXPECT_NEAR(dec.projectors[1].trace().real(), 3.0, 1e-12);
  DenseOperator sum = DenseOperator::Zero(dec.size(), dec.size());
  for (const auto& p : dec.projectors) {
    EXPECT_LT((p * p - p).norm(), 1e-12);
    sum += p;
  }
  EXPECT_LT((sum - DenseOperator::Identity(dec.size(), dec.size())).norm(), 1e-12);
  EXPECT_THROW(dec.index_of(3.0), std::invalid_argument);
}

TEST(Effective, LiteralCouplings) {
  ProtocolConfig c;
  c.signs = sign_pattern(0);
  const StepHamiltonian h = build_step_hamiltonian(1, c);
  const EffectiveHamiltonian heff = dark_hamiltonian(h, BasisState::parse("01"));
  ASSERT_EQ(heff.size(), 3);
  const double t = 7.0;
  const DenseOperator m = heff.matrix(t);
  const double wi = h.envelope(Leg::initial, t), wt = h.envelope(Leg::target, t);
  EXPECT_NEAR(m(1, 0).real(), -wi / std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(m(1, 2).real(), wt / std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(std::abs(m(0, 2)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m(1, 1)), 0.0, 1e-12);
}

TEST(Effective, LimitPropagatorAgreesWithEffectiveEvolution) {
  ProtocolConfig c;
  const StepHamiltonian h = build_step_hamiltonian(1, c);
  const auto sub = reachable_subspace(BasisState::parse("01"), 1, c.space());
  const ZenoDecomposition dec = zeno_decompose(h.cavity(), sub, c.space(), c.g);
  const DenseOperator u = zeno_limit_propagator(h, dec, c.t_f, 4000);
  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(dec.size());
  start(0) = 1.0;
  const StateVector limit = dec.embedding * (u * start);

  const EffectiveHamiltonian heff = effective_hamiltonian(h, dec, 0.0);
  const TimeGrid grid{0.0, c.t_f, c.dt, c.steps_per_pulse()};
  const StateVector psi0 = basis_vector(BasisState::parse("01"), c.space());
  const Eigen::VectorXcd c1 = schrodinger_evolve(heff, Eigen::VectorXcd(heff.restrict(psi0)), grid)
                                  .final_state();
  EXPECT_LT((limit - heff.embed(c1)).norm(), 1e-6);
}

TEST(Effective, ZenoErrorShrinksWithCoupling) {
  ProtocolConfig c;
  double previous = 1.0;
  for (double g : {5.0, 10.0, 20.0, 50.0}) {
    const double err = zeno_error(c, 1, BasisState::parse("01"), g);
    EXPECT_LT(err, previous) << "g = " << g;
    previous = err;
  }
  EXPECT_LT(zeno_error(c, 1, BasisState::parse("01"), 5.0), 0.15);
}

TEST(Effective, FullDynamicsStaysInDarkManifold) {
  ProtocolConfig c;
  const StepHamiltonian h = build_step_hamiltonian(1, c);
  const EffectiveHamiltonian heff = dark_hamiltonian(h, BasisState::parse("01"));
  const TimeGrid grid{0.0, c.t_f, c.dt, 20};
  const auto traj = schrodinger_evolve(h, basis_vector(BasisState::parse("01"), c.space()), grid);
  EXPECT_LT(dark_leakage(traj, heff), 0.01);
}
