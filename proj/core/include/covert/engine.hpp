#pragma once

// Repeated-game driver. One path couples the receiver's true belief (updated
// from the actual observation) with the sender's law of that belief (updated
// from her own information only).

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "covert/belief.hpp"
#include "covert/model.hpp"
#include "covert/strategy.hpp"

namespace covert {

// Per-trial random streams. Trial i of a run seeded with `base` draws from
// std::mt19937_64 seeded with splitmix64(base + i); the engine's outputs
// depend only on that sequence, never on scheduling.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0,1) from the top 53 bits.
  double uniform();
  // Index sampled from a pmf by inversion; never returns a zero-mass index.
  std::size_t sample(std::span<const double> pmf);

 private:
  std::mt19937_64 engine_;
};

struct GameState {
  std::size_t step = 0;
  Belief true_belief;
  BeliefDistribution attacker_dist;
  Rng rng{0};
};

GameState initial_state(const Scenario& s, std::uint64_t seed);

struct StepRecord {
  std::size_t k = 0;
  Symbol input = 0;
  Symbol action = 0;
  Symbol state = 0;
  Symbol observation = 0;
  double pi_true = 0.0;  // receiver's belief after observing y_k
  double pi_hat = 0.0;   // sender's estimate of that belief
  Symbol reaction = 0;
  bool fixed_point = false;
};

// Forces the input and/or observation of a step instead of sampling them.
// The skipped draws are not consumed from the generator.
struct StepOverrides {
  std::optional<Symbol> input;
  std::optional<Symbol> observation;
};

struct EngineOptions {
  StageOptions stage;
  std::size_t max_support = kDefaultMaxSupport;
};

StepRecord step_game(GameState& state, const Scenario& s, const StepOverrides& overrides = {},
                     const EngineOptions& options = {});

struct Trajectory {
  double initial_pi_true = 0.0;
  double initial_pi_hat = 0.0;
  std::vector<StepRecord> steps;
  // Smallest N with every recorded action from N on equal to a_b. Only
  // meaningful within the recorded horizon.
  std::optional<std::size_t> convergence_step;
};

std::optional<std::size_t> convergence_step(const std::vector<StepRecord>& steps, Symbol benign);

// First step whose pi_hat reaches `threshold`.
std::optional<std::size_t> crossing_step(const Trajectory& t, double threshold);

// Throws InvalidScenario if the scenario fails validate_scenario.
Trajectory run_path(const Scenario& s, std::uint64_t seed, const EngineOptions& options = {});

struct MonteCarloSummary {
  std::size_t n_trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> mean_pi_true;
  std::vector<double> var_pi_true;  // population variance across trials
  // pi_hat column of trial 0; see pi_hat_seed_independent.
  std::vector<double> pi_hat;
  bool pi_hat_seed_independent = true;
  // convergence step -> number of trials; trials without one are counted in
  // `not_converged`.
  std::map<std::size_t, std::size_t> convergence_histogram;
  std::size_t not_converged = 0;
};

// `workers == 0` uses the hardware concurrency. Results do not depend on it.
MonteCarloSummary run_monte_carlo(const Scenario& s, std::size_t n_trials,
                                  std::uint64_t base_seed, std::size_t workers = 0,
                                  const EngineOptions& options = {});

inline constexpr double kMonotoneTolerance = 1e-10;

enum class StepClass { kEquality, kStrictIncrease };

struct AuditViolation {
  std::size_t k;
  std::string what;
};

struct AuditReport {
  std::vector<StepClass> classes;
  std::vector<AuditViolation> violations;
  bool ok() const { return violations.empty(); }
};

// pi_hat never decreases; it stays put exactly at benign steps and strictly
// grows at the others.
AuditReport monotonicity_audit(const Trajectory& t, Symbol benign_action,
                               double tol = kMonotoneTolerance);

struct BeliefCeilingReport {
  bool holds = true;
  std::optional<std::size_t> first_violation;
};

inline constexpr double kDefaultBeliefCeiling = 1.0 - 1e-6;

// Finite-horizon proxy for the requirement that rational attackers keep the
// receiver's belief away from certainty: true iff the true belief never
// exceeds `threshold` on the recorded steps.
BeliefCeilingReport assumption5_monitor(const Trajectory& t,
                                        double threshold = kDefaultBeliefCeiling);

}  // namespace covert
