#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "covert/belief.hpp"
#include "covert/engine.hpp"
#include "covert/error.hpp"
#include "covert/scenario_io.hpp"
#include "covert/verify.hpp"

namespace covert::cli {

namespace {

Scenario load(const RunConfig& cfg) {
  Scenario s = cfg.scenario_path ? load_scenario_file(*cfg.scenario_path) : preset(*cfg.preset);
  if (cfg.horizon) s.horizon = *cfg.horizon;
  if (cfg.seed) s.seed = *cfg.seed;
  if (cfg.merge_tolerance) s.merge_tolerance = *cfg.merge_tolerance;
  check_structure(s);
  return s;
}

// Writes to --out when given, otherwise to `out`.
template <typename Fn>
void emit(const RunConfig& cfg, std::ostream& out, Fn&& write) {
  if (!cfg.out_path) {
    write(out);
    return;
  }
  std::ofstream file(*cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + *cfg.out_path + "'");
  write(file);
}

std::vector<Symbol> symbols(const std::vector<std::string>& labels, const Alphabet& alphabet) {
  std::vector<Symbol> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(alphabet.index_of(l));
  return out;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Scenario s = load(cfg);
  const Trajectory t = run_path(s, s.seed);
  emit(cfg, out, [&](std::ostream& o) { emit_trajectory_csv(t, s.alphabets, o); });
  err << "steps=" << t.steps.size() << " convergence_step="
      << (t.convergence_step ? std::to_string(*t.convergence_step) : "none") << '\n';
  return kExitOk;
}

int cmd_montecarlo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Scenario s = load(cfg);
  const std::size_t trials = cfg.trials.value_or(20);
  const MonteCarloSummary m = run_monte_carlo(s, trials, s.seed, cfg.workers);
  emit(cfg, out, [&](std::ostream& o) { emit_summary_csv(m, o); });
  err << "trials=" << m.n_trials << " not_converged=" << m.not_converged
      << " pi_hat_seed_independent=" << (m.pi_hat_seed_independent ? "yes" : "no") << '\n';
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Scenario s = load(cfg);
  const auto actions = symbols(cfg.oracle_actions, s.alphabets.a);
  const auto inputs = symbols(cfg.oracle_inputs, s.alphabets.u);
  if (actions.size() != inputs.size()) {
    throw DomainError("--actions and --inputs must have the same length");
  }
  const double oracle = oracle_estimated_belief(s, actions, inputs);
  auto d = BeliefDistribution::point(Belief(s.initial_belief_malicious));
  for (std::size_t t = 0; t < actions.size(); ++t) {
    d = dist_step(d, likelihood_pair(s, inputs[t], actions[t]), s.merge_tolerance);
  }
  const double recursive = estimated_belief(d);
  emit(cfg, out, [&](std::ostream& o) {
    o << "horizon,oracle_pi_hat_m,recursive_pi_hat_m,abs_diff\n"
      << actions.size() << ',' << format_real(oracle) << ',' << format_real(recursive) << ','
      << format_real(std::abs(oracle - recursive)) << '\n';
  });
  return kExitOk;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Scenario s = load(cfg);
  VerifyConfig vc;
  vc.seeds = cfg.seeds;
  vc.base_seed = s.seed;
  const VerifyReport report = run_verification(s, vc);
  emit(cfg, out, [&](std::ostream& o) { write_report(report, o); });
  err << (report.passed() ? "verify: all checks passed" : "verify: checks failed") << '\n';
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert-reaction signaling game simulator and verifier", "covert"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    auto* scenario = sub->add_option("--scenario", cfg.scenario_path, "Scenario JSON file");
    auto* pre = sub->add_option("--preset", cfg.preset, "Built-in scenario")
                    ->check(CLI::IsMember(preset_names()));
    scenario->excludes(pre);
    pre->excludes(scenario);
    sub->add_option("--horizon", cfg.horizon, "Steps per path");
    sub->add_option("--seed", cfg.seed, "Seed (base seed for multi-path commands)");
    sub->add_option("--tol", cfg.merge_tolerance, "Belief support merge tolerance")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
  };

  auto* run = app.add_subcommand("run", "Simulate one path, emit trajectory CSV");
  add_common(run);
  auto* mc = app.add_subcommand("montecarlo", "Simulate many paths, emit summary CSV");
  add_common(mc);
  mc->add_option("--trials", cfg.trials, "Number of paths (default 20)")->check(CLI::PositiveNumber);
  mc->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
  auto* verify = app.add_subcommand("verify", "Run the verification battery");
  add_common(verify);
  verify->add_option("--seeds", cfg.seeds, "Paths in the seed sweep (default 10)")
      ->check(CLI::PositiveNumber);
  auto* oracle = app.add_subcommand("oracle", "Brute-force estimated belief for a fixed prefix");
  add_common(oracle);
  oracle->add_option("--actions", cfg.oracle_actions, "Malicious actions a_0..a_{k-1}")
      ->delimiter(',')
      ->required();
  oracle->add_option("--inputs", cfg.oracle_inputs, "Inputs u_0..u_{k-1}")
      ->delimiter(',')
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!cfg.scenario_path && !cfg.preset) {
    err << "covert: one of --scenario or --preset is required\n";
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(cfg, out, err);
    if (mc->parsed()) return cmd_montecarlo(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (oracle->parsed()) return cmd_oracle(cfg, out, err);
  } catch (const SchemaError& e) {
    err << "covert: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "covert: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "covert: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace covert::cli
