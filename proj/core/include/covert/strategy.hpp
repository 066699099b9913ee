#pragma once

// Per-step best responses. The malicious sender, holding only her estimate
// pi_hat of the receiver's belief, looks for an action that is a best response
// to the reaction rule the receiver would use if it knew she plays that very
// action.

#include <vector>

#include "covert/belief.hpp"
#include "covert/model.hpp"

namespace covert {

// Expected utilities within this relative distance count as tied.
inline constexpr double kUtilityTieTolerance = 1e-12;

bool utility_tied(double a, double b);

// Reaction chosen for each observation y at the current step.
struct ReactionRule {
  std::vector<Symbol> reactions;

  Symbol operator[](Symbol y) const { return reactions.at(y); }
  std::size_t size() const { return reactions.size(); }
  bool operator==(const ReactionRule&) const = default;
};

struct StagePolicy {
  Symbol malicious_action = 0;
  ReactionRule modeled_reactions;
  double sender_value = 0.0;
  bool fixed_point_found = false;
};

// What solve_stage plays when no action is a best response to its own
// modeled reaction rule.
enum class FallbackPolicy {
  // Best-respond to the rule the receiver uses when it models the sender as
  // playing a_b (posterior == pi_hat for every y).
  kBestResponseToBenignModel,
  // Play a_b.
  kBenignAction,
};

struct StageOptions {
  FallbackPolicy fallback = FallbackPolicy::kBestResponseToBenignModel;
};

// argmax_r  pi_b U^r(b, Sigma(u,a_b), a_b, r) + pi_m U^r(m, Sigma(u,a_mal), a_mal, r).
// Tied reactions are separated by their utility against the malicious type
// (the receiver, when indifferent, guards against the attacker), then by
// lowest index. For the binary example this gives r = 1 exactly at the
// threshold belief.
Symbol receiver_reaction(Belief posterior, Symbol u, Symbol malicious_action, const Scenario& s);

// The receiver's rule as the sender models it when she plays `candidate`:
// for each y, Bayes from pi_hat with likelihoods (candidate vs a_b), then the
// receiver's best reaction.
ReactionRule modeled_reaction_rule(double pi_hat, Symbol u, Symbol candidate, const Scenario& s);

double sender_expected_utility(Symbol action, const ReactionRule& rule, Symbol u,
                               const Scenario& s);

// Every action maximizing sender_expected_utility against `rule`, ascending.
std::vector<Symbol> best_responses(const ReactionRule& rule, Symbol u, const Scenario& s);

// Checks that policy.malicious_action is a best response to its own modeled
// reaction rule.
bool is_self_consistent(const StagePolicy& policy, Symbol u, const Scenario& s);

// Among self-consistent actions picks the one with the largest own expected
// utility (lowest index on ties). Falls back according to `options` when none
// exists.
StagePolicy solve_stage(double pi_hat, Symbol u, const Scenario& s, StageOptions options = {});

// The benign type always plays a_b.
Symbol benign_action_policy(const Scenario& s);

}  // namespace covert
