#include <CLI11.hpp>

#include <qzdswap/cli.hpp>

namespace cli = qzdswap::cli;

int main(int argc, char** argv) {
  CLI::App app{"Three-step SWAP gate simulator (cavity QED, Zeno dynamics, invariant-engineered pulses)"};
  app.require_subcommand(1);

  std::string config_path;

  auto* run = app.add_subcommand("run", "Propagate the protocol and write the population trajectory");
  cli::RunOptions run_opts;
  bool force_open = false, force_closed = false;
  run->add_option("config", config_path, "Config file (JSON, comments allowed)")->required();
  run->add_option("--initial", run_opts.initial, "00, 01, 10, 11 or superposition");
  auto* open_flag = run->add_flag("--open", force_open, "Master-equation evolution");
  run->add_flag("--closed", force_closed, "Schroedinger evolution")->excludes(open_flag);
  run->add_option("--out", run_opts.out, "Trajectory CSV");

  auto* pulses = app.add_subcommand("pulses", "Write the six pulse envelopes over [0, 3 t_f]");
  std::string pulses_out;
  pulses->add_option("config", config_path, "Config file")->required();
  pulses->add_option("--out", pulses_out, "Pulse CSV (standard output if omitted)");

  auto* sweep = app.add_subcommand("sweep", "Fidelity over a (kappa, gamma) grid");
  cli::SweepOptions sweep_opts;
  std::string branching;
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--gamma", sweep_opts.gamma, "start:stop:count");
  sweep->add_option("--kappa", sweep_opts.kappa, "Comma-separated list");
  sweep->add_option("--branching", branching, "per_channel or total_split")
      ->check(CLI::IsMember({"per_channel", "total_split"}));
  sweep->add_option("--threads", sweep_opts.threads, "Worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_opts.out, "Sweep CSV (standard output if omitted)");

  auto* check = app.add_subcommand("check", "Run a verification suite");
  std::string which;
  check->add_option("config", config_path, "Config file")->required();
  check->add_option("--which", which, "invariant, zeno, odes, gate or convergence")
      ->required()
      ->check(CLI::IsMember({"invariant", "zeno", "odes", "gate", "convergence"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  if (*run) {
    if (force_open) run_opts.evolution = qzdswap::Evolution::open;
    if (force_closed) run_opts.evolution = qzdswap::Evolution::closed;
    return cli::cmd_run(config_path, run_opts);
  }
  if (*pulses) return cli::cmd_pulses(config_path, pulses_out);
  if (*sweep) {
    if (!branching.empty()) sweep_opts.branching = qzdswap::branching_from_string(branching);
    return cli::cmd_sweep(config_path, sweep_opts);
  }
  return cli::cmd_check(config_path, which);
}
