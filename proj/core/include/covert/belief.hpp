#pragma once

// Receiver-side Bayes recursion over the two sender types and the
// sender-side law of the receiver's belief.
//
// Under covert reactions the sender never sees y_k, so she cannot follow the
// receiver's belief pi_k. She can however track the distribution of pi_k given
// her own information (inputs and her own actions): a finite mixture of belief
// values, one per reachable observation history, merged when they coincide.
// The mean of that mixture is her estimate pi_hat_k.

#include <cstddef>
#include <span>
#include <vector>

#include "covert/model.hpp"

namespace covert {

class Belief {
 public:
  Belief() = default;
  // Throws DomainError unless 0 <= malicious <= 1.
  explicit Belief(double malicious);

  double malicious() const { return malicious_; }
  double benign() const { return 1.0 - malicious_; }
  bool interior() const { return malicious_ > 0.0 && malicious_ < 1.0; }

  bool operator==(const Belief&) const = default;

 private:
  double malicious_ = 0.5;
};

// Observation likelihoods under the malicious sender's action (`malicious`)
// and under the benign action (`benign`), for one realized input.
struct LikelihoodPair {
  std::vector<double> malicious;
  std::vector<double> benign;
};

// lambda(.|Sigma(u, a)) against lambda(.|Sigma(u, a_b)).
LikelihoodPair likelihood_pair(const Scenario& s, Symbol u, Symbol malicious_action);

// Throws DomainError unless both sides are pmfs of equal length.
void check_likelihoods(const LikelihoodPair& lik);

Belief bayes_update(Belief prior, Symbol y, const LikelihoodPair& lik);

struct SupportPoint {
  Belief belief;
  double weight = 0.0;
};

inline constexpr double kDefaultMergeTolerance = 1e-9;
inline constexpr std::size_t kDefaultMaxSupport = 10000;

// Discrete law over belief values. Support is kept sorted by malicious mass,
// normalized, and pairwise farther apart than the merge tolerance used to
// build it.
class BeliefDistribution {
 public:
  BeliefDistribution() = default;

  static BeliefDistribution point(Belief b);

  std::span<const SupportPoint> support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

  // Total weight dropped by the support cap since the initial point mass.
  double discarded_weight() const { return discarded_weight_; }

 private:
  friend BeliefDistribution merge_support(std::vector<SupportPoint>, double, std::size_t);
  friend BeliefDistribution dist_step(const BeliefDistribution&, const LikelihoodPair&, double,
                                      std::size_t);

  std::vector<SupportPoint> support_;
  double discarded_weight_ = 0.0;
};

// Points closer than `tol` in malicious mass collapse to their weight-averaged
// mass with summed weight. If more than `max_support` points survive, the
// lightest are dropped and the rest renormalized (logged to std::clog).
BeliefDistribution merge_support(std::vector<SupportPoint> points, double tol,
                                 std::size_t max_support = kDefaultMaxSupport);

// Advances the law of the receiver's belief by one observation drawn from the
// malicious likelihood.
BeliefDistribution dist_step(const BeliefDistribution& d, const LikelihoodPair& lik, double tol,
                             std::size_t max_support = kDefaultMaxSupport);

double estimated_belief(const BeliefDistribution& d);

// One-step growth factor of the estimated malicious mass from a point prior:
//   G = sum_y m_y^2 / (b_y * pi_b + m_y * pi_m)  >= 1,
// with equality iff m == b.
double g_factor(const LikelihoodPair& lik, Belief prior);

// g(alpha, m, b) = sum_y m_y^2 / (alpha m_y + (1 - alpha) b_y); equals
// g_factor at alpha = pi_m.
double growth_g(double alpha, const LikelihoodPair& lik);

// h(alpha, m, b) = sum_y m_y b_y / (alpha m_y + (1 - alpha) b_y), so that
// g = (sum m) / alpha - (1 - alpha) / alpha * h.
double growth_h(double alpha, const LikelihoodPair& lik);

// sum_y m_y^(1-alpha) b_y^alpha; bounds h from above and is itself <= 1.
double weighted_geometric_sum(double alpha, const LikelihoodPair& lik);

inline constexpr std::size_t kOracleHorizonBound = 8;

// Brute-force pi_hat_k: enumerates every observation history of length k,
// chains Bayes along each one and averages the terminal beliefs weighted by
// the history's probability under the given malicious actions. Starts from the
// scenario's initial belief.
double oracle_estimated_belief(const Scenario& s, std::span<const Symbol> actions,
                               std::span<const Symbol> inputs,
                               std::size_t horizon_bound = kOracleHorizonBound);

}  // namespace covert
