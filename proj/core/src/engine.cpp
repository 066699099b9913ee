#include "covert/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "covert/error.hpp"

namespace covert {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return splitmix64(base_seed + trial_index);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::sample(std::span<const double> pmf) {
  const double u = uniform();
  double cum = 0.0;
  std::size_t last_positive = pmf.size();
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (pmf[i] <= 0.0) continue;
    last_positive = i;
    cum += pmf[i];
    if (u < cum) return i;
  }
  if (last_positive == pmf.size()) throw DomainError("cannot sample from an all-zero pmf");
  return last_positive;
}

GameState initial_state(const Scenario& s, std::uint64_t seed) {
  const Belief pi0(s.initial_belief_malicious);
  return GameState{0, pi0, BeliefDistribution::point(pi0), Rng(seed)};
}

StepRecord step_game(GameState& state, const Scenario& s, const StepOverrides& overrides,
                     const EngineOptions& options) {
  StepRecord rec;
  rec.k = state.step;
  rec.input = overrides.input ? *overrides.input : state.rng.sample(s.inputs.pmf());

  const double pi_hat = estimated_belief(state.attacker_dist);
  const StagePolicy policy = solve_stage(pi_hat, rec.input, s, options.stage);
  rec.action = policy.malicious_action;
  rec.fixed_point = policy.fixed_point_found;
  rec.state = system_state(s, rec.input, rec.action);
  rec.observation =
      overrides.observation ? *overrides.observation : state.rng.sample(s.channel.row(rec.state));

  // The receiver runs Bayes with the sender's actual best response.
  const LikelihoodPair lik = likelihood_pair(s, rec.input, rec.action);
  state.true_belief = bayes_update(state.true_belief, rec.observation, lik);
  rec.pi_true = state.true_belief.malicious();
  rec.reaction = receiver_reaction(state.true_belief, rec.input, rec.action, s);

  state.attacker_dist = dist_step(state.attacker_dist, lik, s.merge_tolerance, options.max_support);
  rec.pi_hat = estimated_belief(state.attacker_dist);
  ++state.step;
  return rec;
}

std::optional<std::size_t> convergence_step(const std::vector<StepRecord>& steps, Symbol benign) {
  if (steps.empty()) return std::nullopt;
  std::size_t n = steps.size();
  while (n > 0 && steps[n - 1].action == benign) --n;
  if (n == steps.size()) return std::nullopt;
  return n;
}

std::optional<std::size_t> crossing_step(const Trajectory& t, double threshold) {
  for (const auto& r : t.steps) {
    if (r.pi_hat >= threshold) return r.k;
  }
  return std::nullopt;
}

Trajectory run_path(const Scenario& s, std::uint64_t seed, const EngineOptions& options) {
  check_structure(s);
  if (auto report = validate_scenario(s); !report.ok()) {
    std::string msg = "scenario violates standing assumptions:";
    for (const auto& v : report.violations) {
      msg += " ";
      msg += to_string(v.assumption);
      msg += " (" + v.witness + ")";
    }
    throw InvalidScenario(msg);
  }
  GameState state = initial_state(s, seed);
  Trajectory t;
  t.initial_pi_true = state.true_belief.malicious();
  t.initial_pi_hat = estimated_belief(state.attacker_dist);
  t.steps.reserve(s.horizon);
  for (std::size_t k = 0; k < s.horizon; ++k) t.steps.push_back(step_game(state, s, {}, options));
  t.convergence_step = convergence_step(t.steps, s.benign_action);
  return t;
}

MonteCarloSummary run_monte_carlo(const Scenario& s, std::size_t n_trials,
                                  std::uint64_t base_seed, std::size_t workers,
                                  const EngineOptions& options) {
  if (n_trials == 0) throw DomainError("Monte Carlo needs at least one trial");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n_trials);

  std::vector<Trajectory> paths(n_trials);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n_trials; i += workers) {
            paths[i] = run_path(s, trial_seed(base_seed, i), options);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MonteCarloSummary sum;
  sum.n_trials = n_trials;
  sum.base_seed = base_seed;
  const std::size_t horizon = s.horizon;
  sum.mean_pi_true.assign(horizon, 0.0);
  sum.var_pi_true.assign(horizon, 0.0);
  sum.pi_hat.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k) sum.pi_hat[k] = paths[0].steps[k].pi_hat;

  for (const auto& p : paths) {
    for (std::size_t k = 0; k < horizon; ++k) {
      sum.mean_pi_true[k] += p.steps[k].pi_true;
      if (p.steps[k].pi_hat != sum.pi_hat[k]) sum.pi_hat_seed_independent = false;
    }
    if (p.convergence_step) {
      ++sum.convergence_histogram[*p.convergence_step];
    } else {
      ++sum.not_converged;
    }
  }
  const auto n = static_cast<double>(n_trials);
  for (auto& m : sum.mean_pi_true) m /= n;
  for (const auto& p : paths) {
    for (std::size_t k = 0; k < horizon; ++k) {
      const double d = p.steps[k].pi_true - sum.mean_pi_true[k];
      sum.var_pi_true[k] += d * d;
    }
  }
  for (auto& v : sum.var_pi_true) v /= n;
  return sum;
}

AuditReport monotonicity_audit(const Trajectory& t, Symbol benign_action, double tol) {
  AuditReport report;
  report.classes.reserve(t.steps.size());
  double prev = t.initial_pi_hat;
  for (const auto& r : t.steps) {
    const double diff = r.pi_hat - prev;
    if (diff < -tol) report.violations.push_back({r.k, "estimated belief decreased"});
    if (r.action == benign_action) {
      report.classes.push_back(StepClass::kEquality);
      if (std::abs(diff) > tol) {
        report.violations.push_back({r.k, "estimated belief moved under the benign action"});
      }
    } else {
      report.classes.push_back(StepClass::kStrictIncrease);
      if (!(diff > tol)) {
        report.violations.push_back({r.k, "estimated belief did not grow under an attack"});
      }
    }
    prev = r.pi_hat;
  }
  return report;
}

BeliefCeilingReport assumption5_monitor(const Trajectory& t, double threshold) {
  for (const auto& r : t.steps) {
    if (r.pi_true > threshold) return {false, r.k};
  }
  return {};
}

}  // namespace covert
