#pragma once

// Command implementations behind the qzdswap executable. Each returns a
// process exit code: 0 success, 1 operational error, 2 failed verification.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "config_io.hpp"
#include "protocol.hpp"

namespace qzdswap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

struct Streams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

/// Populations recorded by `run`: the computational basis and the
/// intermediate, excited and one-photon states the protocol passes through.
inline std::vector<BasisState> trajectory_labels() {
  std::vector<BasisState> labels(kQubitBasis.begin(), kQubitBasis.end());
  for (const char* s : {"1a", "a1", "aa", "e1", "1e"}) labels.push_back(BasisState::parse(s));
  labels.push_back(BasisState::parse("11_1"));
  return labels;
}

inline std::array<Complex, 4> initial_amplitudes(const std::string& which,
                                                 const std::array<Complex, 4>& superposition) {
  if (which == "superposition") return superposition;
  const std::array<std::string, 4> names{"00", "01", "10", "11"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (which == names[i]) {
      std::array<Complex, 4> a{};
      a[i] = 1.0;
      return a;
    }
  }
  throw ConfigError("unknown --initial '" + which + "' (expected 00, 01, 10, 11 or superposition)");
}

/// "start:stop:count" -> count evenly spaced values including both ends.
inline std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("range '" + spec + "' must be start:stop:count");
  double start = 0.0, stop = 0.0;
  int count = 0;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("range '" + spec + "' is not numeric");
  }
  if (count < 1) throw ConfigError("range '" + spec + "' needs count >= 1");
  if (count == 1) return {start};
  std::vector<double> values;
  for (int i = 0; i < count; ++i) values.push_back(start + (stop - start) * i / (count - 1));
  return values;
}

inline std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> values;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("list entry '" + item + "' is not numeric");
    }
  }
  if (values.empty()) throw ConfigError("empty value list");
  return values;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write output file '" + path + "'");
  return file;
}

template <class Body>
int guarded(Streams io, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace detail

struct RunOptions {
  std::string initial = "superposition";
  Evolution evolution = Evolution::automatic;
  std::string out;
};

inline int cmd_run(const std::string& config_path, const RunOptions& opts, Streams io = {}) {
  return detail::guarded(io, [&] {
    const ConfigFile file = load_config(config_path);
    ProtocolConfig config = file.protocol;
    config.input_amplitudes = initial_amplitudes(opts.initial, config.input_amplitudes);
    config.validate();

    const bool open = opts.evolution == Evolution::open ||
                      (opts.evolution == Evolution::automatic && !config.noise.closed());
    const SpaceDescriptor space = config.space();
    const StateVector psi0 = qubit_state(config.input_amplitudes, space);
    const StateVector ideal = ideal_states(config)[3];
    const auto labels = trajectory_labels();
    const std::string path = opts.out.empty() ? file.trajectory_csv : opts.out;
    const std::string comment = config_summary(config);

    double fidelity = 0.0;
    std::vector<double> final_pops;
    auto report = [&](const auto& traj) {
      if (!path.empty()) {
        auto csv = detail::open_output(path);
        write_trajectory_csv(csv, traj, labels, space, comment);
      }
      for (const auto& l : labels) final_pops.push_back(probability(traj.final_state(), basis_index(l, space)));
    };
    if (open) {
      const auto traj = propagate_open(config, density_matrix(psi0));
      fidelity = state_fidelity(ideal, traj.final_state());
      report(traj);
    } else {
      const auto traj = propagate_closed(config, psi0);
      fidelity = state_fidelity(ideal, traj.final_state());
      report(traj);
    }
    io.out << "evolution: " << (open ? "open" : "closed") << '\n';
    io.out << "initial: " << opts.initial << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
      io.out << "final P(" << labels[i].label() << "): " << format_number(final_pops[i]) << '\n';
    }
    io.out << "fidelity: " << format_number(fidelity) << '\n';
    if (!path.empty()) io.out << "trajectory written to " << path << '\n';
    return kExitOk;
  });
}

/// Pulse table over [0, 3 t_f]. Each column is nonzero only within its own
/// step (closed interval); values are the unsigned envelopes.
inline void write_pulses_csv(std::ostream& out, const ProtocolConfig& config,
                             const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "t,omega_0A,omega_aB,omega_0B,omega_aA,omega_a_prime,omega_0_prime\n";
  const std::array<PulseSchedule, 3> pulses{config.pulses(1), config.pulses(2), config.pulses(3)};
  const int per_step = config.steps_per_pulse();
  const int total = 3 * per_step;
  auto emit = [&](int n) {
    const double t = n * config.dt;
    out << format_number(t);
    for (int step = 1; step <= 3; ++step) {
      const int first = (step - 1) * per_step;
      const bool active = n >= first && n <= first + per_step;
      const double local = (n - first) * config.dt;
      const auto& p = pulses[static_cast<std::size_t>(step - 1)];
      out << ',' << format_number(active ? p.omega_initial_leg(local) : 0.0) << ','
          << format_number(active ? p.omega_target_leg(local) : 0.0);
    }
    out << '\n';
  };
  for (int n = 0; n < total; n += config.sample_every) emit(n);
  emit(total);
}

inline int cmd_pulses(const std::string& config_path, const std::string& out_path,
                      Streams io = {}) {
  return detail::guarded(io, [&] {
    const ConfigFile file = load_config(config_path);
    const std::string path = out_path.empty() ? file.pulses_csv : out_path;
    if (path.empty()) {
      write_pulses_csv(io.out, file.protocol, config_summary(file.protocol));
    } else {
      auto csv = detail::open_output(path);
      write_pulses_csv(csv, file.protocol, config_summary(file.protocol));
      io.out << "pulses written to " << path << '\n';
    }
    return kExitOk;
  });
}

struct SweepOptions {
  std::string gamma = "0:1:5";
  std::string kappa = "0,1,5,10";
  std::optional<Branching> branching;
  std::string out;
  unsigned threads = 0;
};

inline int cmd_sweep(const std::string& config_path, const SweepOptions& opts, Streams io = {}) {
  return detail::guarded(io, [&] {
    const ConfigFile file = load_config(config_path);
    ProtocolConfig config = file.protocol;
    if (opts.branching) config.noise.branching = *opts.branching;
    std::vector<double> gammas = parse_range(opts.gamma);
    std::vector<double> kappas = parse_list(opts.kappa);
    for (const auto* v : {&gammas, &kappas}) {
      if (std::any_of(v->begin(), v->end(), [](double x) { return !(x >= 0.0); })) {
        throw ConfigError("decay rates must be non-negative");
      }
    }
    std::sort(gammas.begin(), gammas.end());
    std::sort(kappas.begin(), kappas.end());
    const auto points = sweep(config, gammas, kappas, opts.threads);

    const std::string path = opts.out.empty() ? file.sweep_csv : opts.out;
    if (path.empty()) {
      write_sweep_csv(io.out, points, config_summary(config));
    } else {
      auto csv = detail::open_output(path);
      write_sweep_csv(csv, points, config_summary(config));
      io.out << "sweep written to " << path << '\n';
    }
    const auto worst = std::min_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.fidelity < b.fidelity; });
    io.out << "worst fidelity: " << format_number(worst->fidelity) << " at kappa "
           << format_number(worst->kappa) << ", gamma " << format_number(worst->gamma) << '\n';
    return kExitOk;
  });
}

inline int cmd_check(const std::string& config_path, const std::string& which, Streams io = {}) {
  return detail::guarded(io, [&] {
    const ProtocolConfig config = load_config(config_path).protocol;
    std::vector<CheckLine> lines;
    if (which == "odes") {
      lines = check_odes(config);
    } else if (which == "invariant") {
      lines = check_invariant(config);
    } else if (which == "zeno") {
      lines = check_zeno(config);
    } else if (which == "gate") {
      lines = check_gate(config, io.out);
    } else if (which == "convergence") {
      lines = check_convergence(config);
    } else {
      throw ConfigError("unknown check '" + which +
                        "' (expected invariant, zeno, odes, gate or convergence)");
    }
    io.out << "check " << which << '\n';
    print_checks(io.out, lines);
    const bool ok = all_passed(lines);
    io.out << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? kExitOk : kExitCheckFailed;
  });
}

}  // namespace qzdswap::cli
