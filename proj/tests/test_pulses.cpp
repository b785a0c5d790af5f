#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <qzdswap/pulses.hpp>

using namespace qzdswap;

TEST(Pulses, PeakAmplitudeAtDefaults) {
  const PulseSchedule p = protocol_pulses(0.25, 20.0, kZenoAmplitudeFactor);
  EXPECT_NEAR(p.peak, 0.435, 1e-5);
  EXPECT_NEAR(p.omega_initial_leg(20.0), p.peak, 1e-15);
  EXPECT_NEAR(p.omega_target_leg(0.0), p.peak, 1e-15);
  EXPECT_NEAR(p.omega_initial_leg(0.0), 0.0, 1e-15);
  EXPECT_NEAR(p.omega_target_leg(20.0), 0.0, 1e-15);
}

TEST(Pulses, LambdaFactorScalesPeak) {
  const PulseSchedule z = protocol_pulses(0.25, 20.0, kZenoAmplitudeFactor);
  const PulseSchedule l = protocol_pulses(0.25, 20.0, kLambdaAmplitudeFactor);
  EXPECT_NEAR(l.peak / z.peak, 1.0 / std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(z.scaled(2.0).peak, 2.0 * z.peak, 1e-15);
}

TEST(Pulses, DomainChecks) {
  EXPECT_THROW(protocol_pulses(0.0, 20.0, 1.0), std::invalid_argument);
  EXPECT_THROW(protocol_pulses(std::numbers::pi / 2.0, 20.0, 1.0), std::invalid_argument);
  EXPECT_THROW(protocol_pulses(0.25, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(protocol_pulses(0.25, 20.0, 0.0), std::invalid_argument);
}

TEST(Pulses, SignsDoNotChangeEnvelopes) {
  const PulseSchedule p = protocol_pulses(0.25, 20.0, kZenoAmplitudeFactor).with_signs(-1.0, 1.0);
  EXPECT_EQ(p.sign_initial, -1.0);
  EXPECT_GT(p.omega_initial_leg(10.0), 0.0);
}

TEST(InverseEngineering, ReproducesProtocolPulses) {
  for (double eps : {0.1, 0.25, 0.7, 1.2}) {
    const AngleSchedule angles = protocol_angles(eps, 20.0);
    const PulseSchedule p = protocol_pulses(eps, 20.0, kZenoAmplitudeFactor);
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.2 * k;
      const auto [wi, wt] = inverse_engineer(angles, t);
      EXPECT_NEAR(wi, p.omega_initial_leg(t), 1e-13);
      EXPECT_NEAR(wt, p.omega_target_leg(t), 1e-13);
    }
  }
}

TEST(InverseEngineering, AngleEquationsHoldOnGrid) {
  const AngleSchedule angles = protocol_angles(0.25, 20.0);
  const PulseSchedule p = protocol_pulses(0.25, 20.0, kZenoAmplitudeFactor);
  for (int k = 0; k <= 1000; ++k) {
    const auto r = angle_ode_residual(angles, p, 0.02 * k);
    EXPECT_LT(std::abs(r.nu), 1e-12);
    EXPECT_LT(std::abs(r.beta), 1e-12);
  }
}

TEST(InverseEngineering, WrongAmplitudeLeavesResidual) {
  const AngleSchedule angles = protocol_angles(0.25, 20.0);
  const PulseSchedule p = protocol_pulses(0.25, 20.0, 1.0);
  EXPECT_GT(std::abs(angle_ode_residual(angles, p, 10.0).beta), 1e-3);
}

TEST(InverseEngineering, SingularWhenNuVanishes) {
  AngleSchedule flat = protocol_angles(0.25, 20.0);
  flat.nu = [](double) { return 0.0; };
  EXPECT_THROW(inverse_engineer(flat, 5.0), SingularityError);
}

TEST(Phases, ClosedForm) {
  const PhaseRecord r = lr_phase(0.25);
  EXPECT_NEAR(r.magnitude(), std::numbers::pi / (2.0 * std::sin(0.25)), 1e-14);
  EXPECT_NEAR(r.magnitude(), 6.34912, 5e-6);
  EXPECT_DOUBLE_EQ(r.alpha_plus, -r.alpha_minus);
  EXPECT_NEAR(lr_phase(std::numbers::pi / 2.0).magnitude(), std::numbers::pi / 2.0, 1e-15);
  EXPECT_THROW(lr_phase(0.0), std::invalid_argument);
}

TEST(Phases, FullCycleWhenSinEpsIsQuarterOverN) {
  for (int n = 1; n <= 3; ++n) {
    const double eps = std::asin(1.0 / (4.0 * n));
    EXPECT_NEAR(lr_phase(eps).magnitude(), 2.0 * n * std::numbers::pi, 1e-12);
  }
}
