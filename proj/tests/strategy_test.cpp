#include <gtest/gtest.h>

#include <random>

#include "covert/scenario_io.hpp"
#include "covert/strategy.hpp"
#include "covert/verify.hpp"
#include "support/random_scenario.hpp"

namespace covert {
namespace {

Scenario binary() { return preset("example_sec4"); }

ReactionRule rule(std::vector<Symbol> r) { return ReactionRule{std::move(r)}; }

TEST(ReceiverReaction, ThresholdRule) {
  const Scenario s = binary();
  for (Symbol u : {0u, 1u}) {
    EXPECT_EQ(receiver_reaction(Belief(0.9), u, 1, s), 1u);
    EXPECT_EQ(receiver_reaction(Belief(0.5), u, 1, s), 0u);
    EXPECT_EQ(receiver_reaction(Belief(0.85), u, 1, s), 1u);
    EXPECT_EQ(receiver_reaction(Belief(0.85), u, 0, s), 1u);
    EXPECT_EQ(receiver_reaction(Belief(0.8499999), u, 1, s), 0u);
  }
}

TEST(ReceiverReaction, FullIndifferencePicksLowestIndex) {
  Scenario s = binary();
  s.utilities = UtilityTable(2, 2, 2, s.utilities.sender_values(), std::vector<double>(16, 0.7));
  for (double pi : {0.01, 0.5, 0.85, 0.99}) {
    EXPECT_EQ(receiver_reaction(Belief(pi), 0, 1, s), 0u);
  }
}

TEST(ModeledReactionRule, LowEstimateNeverTriggers) {
  EXPECT_EQ(modeled_reaction_rule(0.15, 0, 1, binary()), rule({0, 0}));
}

TEST(ModeledReactionRule, HighObservationTriggersNearThreshold) {
  const Scenario s = binary();
  // Posteriors from 0.84: y=1 -> 0.462/0.534 = 0.865169; y=0 -> 0.378/0.466 = 0.811159.
  const auto lik = likelihood_pair(s, 0, 1);
  EXPECT_NEAR(bayes_update(Belief(0.84), 1, lik).malicious(), 0.8651685393258427, 1e-15);
  EXPECT_NEAR(bayes_update(Belief(0.84), 0, lik).malicious(), 0.8111587982832618, 1e-15);
  EXPECT_EQ(modeled_reaction_rule(0.84, 0, 1, s), rule({0, 1}));
}

TEST(ModeledReactionRule, BenignCandidateGivesConstantRule) {
  const Scenario s = binary();
  EXPECT_EQ(modeled_reaction_rule(0.3, 0, 0, s), rule({0, 0}));
  EXPECT_EQ(modeled_reaction_rule(0.9, 1, 0, s), rule({1, 1}));
}

TEST(SenderExpectedUtility, Examples) {
  const Scenario s = binary();
  for (Symbol u : {0u, 1u}) {
    EXPECT_DOUBLE_EQ(sender_expected_utility(1, rule({0, 0}), u, s), 3.0);
    EXPECT_DOUBLE_EQ(sender_expected_utility(1, rule({1, 1}), u, s), 0.0);
    EXPECT_DOUBLE_EQ(sender_expected_utility(0, rule({1, 1}), u, s), 1.0);
  }
  EXPECT_NEAR(sender_expected_utility(1, rule({0, 1}), 0, s), 0.45 * 3 + 0.55 * 0, 1e-15);
}

TEST(SolveStage, AttacksWhenUnsuspected) {
  const auto p = solve_stage(0.15, 0, binary());
  EXPECT_TRUE(p.fixed_point_found);
  EXPECT_EQ(p.malicious_action, 1u);
  EXPECT_EQ(p.modeled_reactions, rule({0, 0}));
  EXPECT_DOUBLE_EQ(p.sender_value, 3.0);
}

TEST(SolveStage, HoldsBackWhenSuspected) {
  const auto p = solve_stage(0.90, 0, binary());
  EXPECT_TRUE(p.fixed_point_found);
  EXPECT_EQ(p.malicious_action, 0u);
  EXPECT_EQ(p.modeled_reactions, rule({1, 1}));
  EXPECT_DOUBLE_EQ(p.sender_value, 1.0);
}

TEST(SolveStage, NoPureFixedPointJustBelowThreshold) {
  const Scenario s = binary();
  // rule_1 = {0, 1}: EU(1) = 1.35 < EU(0) = 0.45 + 1.1 = 1.55; rule_0 = {0, 0}: EU(1) = 3 > 2.
  const auto p = solve_stage(0.84, 0, s);
  EXPECT_FALSE(p.fixed_point_found);
  EXPECT_EQ(p.malicious_action, 1u);
  EXPECT_EQ(p.modeled_reactions, rule({0, 0}));

  const auto q = solve_stage(0.84, 0, s, {FallbackPolicy::kBenignAction});
  EXPECT_FALSE(q.fixed_point_found);
  EXPECT_EQ(q.malicious_action, 0u);
}

TEST(SolveStage, FixedPointsAreSelfConsistent) {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 500; ++i) {
    const Scenario s = testing::random_scenario(gen);
    const double pi = testing::uniform(gen, 0.01, 0.99);
    const Symbol u = testing::pick(gen, s.alphabets.u.size());
    const auto p = solve_stage(pi, u, s);
    if (!p.fixed_point_found) continue;
    EXPECT_TRUE(is_self_consistent(p, u, s));
    EXPECT_EQ(p.modeled_reactions, modeled_reaction_rule(pi, u, p.malicious_action, s));
    const auto br = best_responses(p.modeled_reactions, u, s);
    EXPECT_NE(std::find(br.begin(), br.end(), p.malicious_action), br.end());
  }
}

TEST(SolveStage, SingleCrossingAtThreshold) {
  const Scenario s = binary();
  for (Symbol u : {0u, 1u}) {
    const auto actions = stage_action_sweep(s, u, 10000);
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const double pi = (i + 0.5) / 10000.0;
      EXPECT_EQ(actions[i], pi < 0.85 ? 1u : 0u) << "pi=" << pi;
    }
  }
}

TEST(SolveStage, BenignFallbackMovesTheCrossingDown) {
  // With the a_b fallback the attacker quits where the high-observation
  // posterior reaches 0.85: odds(pi*) = (0.85/0.15) * (0.45/0.55).
  const Scenario s = binary();
  const double odds = (0.85 / 0.15) * (0.45 / 0.55);
  const double pi_star = odds / (1.0 + odds);
  for (double pi : {pi_star - 1e-6, pi_star + 1e-6}) {
    const auto p = solve_stage(pi, 0, s, {FallbackPolicy::kBenignAction});
    EXPECT_EQ(p.malicious_action, pi < pi_star ? 1u : 0u);
  }
}

TEST(SolveStage, ArgmaxIgnoresAffineRescaling) {
  std::mt19937_64 gen(43);
  for (int i = 0; i < 300; ++i) {
    const Scenario s = testing::random_scenario(gen);
    Scenario t = s;
    const double scale = testing::uniform(gen, 0.1, 10.0);
    const double shift = testing::uniform(gen, -5.0, 5.0);
    auto sender = s.utilities.sender_values();
    for (auto& v : sender) v = scale * v + shift;
    t.utilities = UtilityTable(s.alphabets.x.size(), s.alphabets.a.size(), s.alphabets.r.size(),
                               sender, s.utilities.receiver_values());
    for (int j = 0; j < 5; ++j) {
      const double pi = testing::uniform(gen, 0.01, 0.99);
      const Symbol u = testing::pick(gen, s.alphabets.u.size());
      const auto a = solve_stage(pi, u, s);
      const auto b = solve_stage(pi, u, t);
      EXPECT_EQ(a.malicious_action, b.malicious_action);
      EXPECT_EQ(a.fixed_point_found, b.fixed_point_found);
    }
  }
}

TEST(BenignActionPolicy, ReturnsConfiguredBenignAction) {
  EXPECT_EQ(benign_action_policy(binary()), 0u);
  Scenario s = binary();
  s.benign_action = 1;
  EXPECT_EQ(benign_action_policy(s), 1u);
}

TEST(UtilityTied, RelativeTolerance) {
  EXPECT_TRUE(utility_tied(0.15, 0.85 * (0.15 / 0.85)));
  EXPECT_FALSE(utility_tied(0.15, 0.15 + 1e-9));
  EXPECT_TRUE(utility_tied(1e6, 1e6 + 1e-7));
}

}  // namespace
}  // namespace covert
