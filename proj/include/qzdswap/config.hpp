#pragma once

// Physical and numerical parameters of a protocol run. Units: g0 = 1, so
// rates are multiples of g0 and times multiples of 1/g0.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hilbert.hpp"
#include "pulses.hpp"

namespace qzdswap {

/// How the spontaneous-emission rate is shared among the three decay
/// channels of each excited level.
enum class Branching {
  per_channel,  ///< rate gamma on every (excited -> ground) channel
  total_split,  ///< rate gamma/3 per channel, total gamma per excited level
};

inline std::string to_string(Branching b) {
  return b == Branching::per_channel ? "per_channel" : "total_split";
}

inline Branching branching_from_string(const std::string& s) {
  if (s == "per_channel") return Branching::per_channel;
  if (s == "total_split") return Branching::total_split;
  throw std::invalid_argument("unknown branching '" + s + "'");
}

struct NoiseModel {
  double kappa = 0.0;
  double gamma = 0.0;
  Branching branching = Branching::per_channel;

  bool closed() const { return kappa == 0.0 && gamma == 0.0; }
  double channel_rate() const { return branching == Branching::per_channel ? gamma : gamma / 3.0; }
};

enum class Step3Amplitude {
  paper_literal,  ///< same sqrt(2)-reduced amplitude as the two Zeno steps
  exact_lambda,   ///< pi/(2 t_f) cot(eps): exact for a directly driven Lambda system
};

inline std::string to_string(Step3Amplitude a) {
  return a == Step3Amplitude::paper_literal ? "paper_literal" : "exact_lambda";
}

inline Step3Amplitude step3_amplitude_from_string(const std::string& s) {
  if (s == "paper_literal") return Step3Amplitude::paper_literal;
  if (s == "exact_lambda") return Step3Amplitude::exact_lambda;
  throw std::invalid_argument("unknown step3_amplitude '" + s + "'");
}

/// Laser-phase factors (+1/-1) of one step's two pulses.
struct StepSigns {
  double initial = 1.0;
  double target = 1.0;

  friend bool operator==(const StepSigns&, const StepSigns&) = default;
};

using SignConfig = std::array<StepSigns, 3>;

/// Pattern k in [0, 8): bit (2 - s) of k set means step s+1 has its initial
/// leg flipped. Step 1 is the most significant bit, so increasing k is the
/// lexicographic order over (step1, step2, step3) with + before -.
inline SignConfig sign_pattern(int k) {
  if (k < 0 || k >= 8) throw std::out_of_range("sign pattern index must be in [0, 8)");
  SignConfig s;
  for (int step = 0; step < 3; ++step) {
    s[static_cast<std::size_t>(step)].initial = (k >> (2 - step)) & 1 ? -1.0 : 1.0;
    s[static_cast<std::size_t>(step)].target = 1.0;
  }
  return s;
}

inline std::string sign_pattern_label(const SignConfig& s) {
  std::string out;
  for (const auto& step : s) {
    out += step.initial > 0 ? '+' : '-';
    out += step.target > 0 ? '+' : '-';
    out += ' ';
  }
  out.pop_back();
  return out;
}

/// Calibrated laser-phase pattern shipped as the default (see protocol::calibrate_signs).
inline constexpr int kDefaultSignPattern = 1;

struct ProtocolConfig {
  double epsilon = 0.25;
  double g = 10.0;
  double t_f = 20.0;
  int n_max = 1;
  double dt = 20.0 / 4000.0;
  int sample_every = 40;
  double chi = 1.0;
  NoiseModel noise{};
  std::array<Complex, 4> input_amplitudes{0.5, 0.5, 0.5, 0.5};
  SignConfig signs = sign_pattern(kDefaultSignPattern);
  Step3Amplitude step3_amplitude = Step3Amplitude::exact_lambda;

  SpaceDescriptor space() const { return SpaceDescriptor(n_max); }

  /// Integration steps per protocol step; dt must divide t_f.
  int steps_per_pulse() const {
    const double ratio = t_f / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
      throw std::invalid_argument("dt must divide t_f evenly");
    }
    return static_cast<int>(rounded);
  }

  double step3_factor() const {
    return step3_amplitude == Step3Amplitude::paper_literal ? kZenoAmplitudeFactor
                                                            : kLambdaAmplitudeFactor;
  }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < std::numbers::pi / 2.0)) {
      throw std::invalid_argument("epsilon must lie in (0, pi/2)");
    }
    if (!(g >= 0.0)) throw std::invalid_argument("g must be non-negative");
    if (!(t_f > 0.0)) throw std::invalid_argument("t_f must be positive");
    if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    (void)steps_per_pulse();
    if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    if (!(noise.kappa >= 0.0) || !(noise.gamma >= 0.0)) {
      throw std::invalid_argument("noise rates must be non-negative");
    }
    double norm = 0.0;
    for (const Complex& a : input_amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw std::invalid_argument("input amplitudes must be normalized (sum |alpha|^2 = 1)");
    }
    for (const auto& s : signs) {
      if (std::abs(s.initial) != 1.0 || std::abs(s.target) != 1.0) {
        throw std::invalid_argument("sign factors must be +1 or -1");
      }
    }
  }

  /// Pulse pair of step 1..3 including the configured laser phases.
  PulseSchedule pulses(int step) const {
    if (step < 1 || step > 3) throw std::out_of_range("step must be 1, 2 or 3");
    const double factor = step == 3 ? step3_factor() : kZenoAmplitudeFactor;
    const auto& s = signs[static_cast<std::size_t>(step - 1)];
    return protocol_pulses(epsilon, t_f, factor).with_signs(s.initial, s.target);
  }
};

}  // namespace qzdswap
