#include "covert/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "covert/error.hpp"

namespace covert {

bool utility_tied(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kUtilityTieTolerance * scale;
}

Symbol receiver_reaction(Belief posterior, Symbol u, Symbol malicious_action, const Scenario& s) {
  const Symbol ab = s.benign_action;
  const Symbol xb = benign_state(s, u);
  const Symbol xm = system_state(s, u, malicious_action);
  const auto& U = s.utilities;

  Symbol best = 0;
  double best_value = 0.0;
  double best_guard = 0.0;
  for (Symbol r = 0; r < s.alphabets.r.size(); ++r) {
    const double guard = U.receiver(TypeTag::kMalicious, xm, malicious_action, r);
    const double value =
        posterior.benign() * U.receiver(TypeTag::kBenign, xb, ab, r) + posterior.malicious() * guard;
    if (r == 0) {
      best_value = value;
      best_guard = guard;
      continue;
    }
    if (utility_tied(value, best_value)) {
      if (guard > best_guard && !utility_tied(guard, best_guard)) {
        best = r;
        best_value = std::max(value, best_value);
        best_guard = guard;
      }
    } else if (value > best_value) {
      best = r;
      best_value = value;
      best_guard = guard;
    }
  }
  return best;
}

ReactionRule modeled_reaction_rule(double pi_hat, Symbol u, Symbol candidate, const Scenario& s) {
  const Belief prior(pi_hat);
  const LikelihoodPair lik = likelihood_pair(s, u, candidate);
  ReactionRule rule;
  rule.reactions.reserve(s.alphabets.y.size());
  for (Symbol y = 0; y < s.alphabets.y.size(); ++y) {
    // Observations impossible under both types never reach the receiver; any
    // reaction is consistent there, so keep the deterministic lowest index.
    if (lik.malicious[y] == 0.0 && lik.benign[y] == 0.0) {
      rule.reactions.push_back(0);
      continue;
    }
    rule.reactions.push_back(receiver_reaction(bayes_update(prior, y, lik), u, candidate, s));
  }
  return rule;
}

double sender_expected_utility(Symbol action, const ReactionRule& rule, Symbol u,
                               const Scenario& s) {
  if (rule.size() != s.alphabets.y.size()) throw DomainError("reaction rule is not total over Y");
  const Symbol x = system_state(s, u, action);
  const auto row = s.channel.row(x);
  double eu = 0.0;
  for (Symbol y = 0; y < row.size(); ++y) {
    if (row[y] == 0.0) continue;
    eu += row[y] * s.utilities.sender(TypeTag::kMalicious, x, action, rule[y]);
  }
  return eu;
}

namespace {

std::vector<double> action_values(const ReactionRule& rule, Symbol u, const Scenario& s) {
  std::vector<double> v(s.alphabets.a.size());
  for (Symbol a = 0; a < v.size(); ++a) v[a] = sender_expected_utility(a, rule, u, s);
  return v;
}

bool is_maximal(const std::vector<double>& values, Symbol a) {
  const double top = *std::max_element(values.begin(), values.end());
  return values[a] >= top || utility_tied(values[a], top);
}

}  // namespace

std::vector<Symbol> best_responses(const ReactionRule& rule, Symbol u, const Scenario& s) {
  const auto values = action_values(rule, u, s);
  std::vector<Symbol> out;
  for (Symbol a = 0; a < values.size(); ++a) {
    if (is_maximal(values, a)) out.push_back(a);
  }
  return out;
}

bool is_self_consistent(const StagePolicy& policy, Symbol u, const Scenario& s) {
  return is_maximal(action_values(policy.modeled_reactions, u, s), policy.malicious_action);
}

StagePolicy solve_stage(double pi_hat, Symbol u, const Scenario& s, StageOptions options) {
  StagePolicy best;
  ReactionRule benign_rule;
  for (Symbol a = 0; a < s.alphabets.a.size(); ++a) {
    ReactionRule rule = modeled_reaction_rule(pi_hat, u, a, s);
    const auto values = action_values(rule, u, s);
    if (a == s.benign_action) benign_rule = rule;
    if (!is_maximal(values, a)) continue;
    const bool better = !best.fixed_point_found ||
                        (values[a] > best.sender_value && !utility_tied(values[a], best.sender_value));
    if (better) best = {a, std::move(rule), values[a], true};
  }
  if (best.fixed_point_found) return best;

  StagePolicy fallback;
  fallback.fixed_point_found = false;
  fallback.modeled_reactions = benign_rule;
  switch (options.fallback) {
    case FallbackPolicy::kBestResponseToBenignModel:
      fallback.malicious_action = best_responses(benign_rule, u, s).front();
      break;
    case FallbackPolicy::kBenignAction:
      fallback.malicious_action = s.benign_action;
      break;
  }
  fallback.sender_value = sender_expected_utility(fallback.malicious_action, benign_rule, u, s);
  return fallback;
}

Symbol benign_action_policy(const Scenario& s) { return s.benign_action; }

}  // namespace covert
