#include "covert/belief.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <string>

#include "covert/error.hpp"

namespace covert {

Belief::Belief(double malicious) : malicious_(malicious) {
  if (!(malicious >= 0.0 && malicious <= 1.0)) {
    throw DomainError("belief mass " + std::to_string(malicious) + " outside [0,1]");
  }
}

LikelihoodPair likelihood_pair(const Scenario& s, Symbol u, Symbol malicious_action) {
  const auto m = s.channel.row(system_state(s, u, malicious_action));
  const auto b = s.channel.row(benign_state(s, u));
  return {{m.begin(), m.end()}, {b.begin(), b.end()}};
}

void check_likelihoods(const LikelihoodPair& lik) {
  if (lik.malicious.size() != lik.benign.size() || lik.malicious.empty()) {
    throw DomainError("likelihood vectors must be non-empty and of equal length");
  }
  for (const auto* v : {&lik.malicious, &lik.benign}) {
    double sum = 0.0;
    for (double p : *v) {
      if (!(p >= 0.0)) throw DomainError("likelihood entries must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      throw DomainError("likelihood vector does not sum to 1");
    }
  }
}

Belief bayes_update(Belief prior, Symbol y, const LikelihoodPair& lik) {
  if (y >= lik.malicious.size() || y >= lik.benign.size()) {
    throw DomainError("observation index " + std::to_string(y) + " out of range");
  }
  const double num = lik.malicious[y] * prior.malicious();
  const double den = lik.benign[y] * prior.benign() + num;
  if (!(den > 0.0)) {
    throw ImpossibleObservation("observation " + std::to_string(y) +
                                " has zero likelihood under both types");
  }
  return Belief(std::clamp(num / den, 0.0, 1.0));
}

BeliefDistribution BeliefDistribution::point(Belief b) {
  BeliefDistribution d;
  d.support_.push_back({b, 1.0});
  return d;
}

namespace {

// Sweep over points sorted by mass. A merged point sits at or right of the
// point it absorbed, so gaps to the left stay above tol.
std::vector<SupportPoint> merge_sorted(const std::vector<SupportPoint>& sorted, double tol) {
  std::vector<SupportPoint> out;
  out.reserve(sorted.size());
  for (const auto& p : sorted) {
    if (!out.empty() && p.belief.malicious() - out.back().belief.malicious() <= tol) {
      auto& last = out.back();
      const double w = last.weight + p.weight;
      const double mass =
          (last.weight * last.belief.malicious() + p.weight * p.belief.malicious()) / w;
      last.belief = Belief(std::clamp(mass, 0.0, 1.0));
      last.weight = w;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

bool by_mass(const SupportPoint& a, const SupportPoint& b) {
  return a.belief.malicious() < b.belief.malicious();
}

// Returns the discarded weight (before renormalization).
double cap_and_normalize(std::vector<SupportPoint>& pts, std::size_t max_support) {
  double discarded = 0.0;
  if (max_support > 0 && pts.size() > max_support) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const SupportPoint& a, const SupportPoint& b) { return a.weight > b.weight; });
    for (std::size_t i = max_support; i < pts.size(); ++i) discarded += pts[i].weight;
    std::clog << "covert: belief support capped at " << max_support << " points, dropped weight "
              << discarded << '\n';
    pts.resize(max_support);
    std::stable_sort(pts.begin(), pts.end(), by_mass);
  }
  double total = 0.0;
  for (const auto& p : pts) total += p.weight;
  for (auto& p : pts) p.weight /= total;
  return discarded / (total + discarded);
}

}  // namespace

BeliefDistribution merge_support(std::vector<SupportPoint> points, double tol,
                                 std::size_t max_support) {
  if (points.empty()) throw DomainError("cannot build a belief distribution from no points");
  if (!(tol >= 0.0)) throw DomainError("merge tolerance must be nonnegative");
  for (const auto& p : points) {
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
      throw DomainError("support weights must be positive");
    }
  }
  std::stable_sort(points.begin(), points.end(), by_mass);
  BeliefDistribution d;
  d.support_ = merge_sorted(points, tol);
  d.discarded_weight_ = cap_and_normalize(d.support_, max_support);
  return d;
}

BeliefDistribution dist_step(const BeliefDistribution& d, const LikelihoodPair& lik, double tol,
                             std::size_t max_support) {
  if (d.empty()) throw DomainError("dist_step on an empty distribution");
  if (lik.malicious.size() != lik.benign.size()) {
    throw DomainError("likelihood vectors must have equal length");
  }
  // Indistinguishable actions leave every posterior at its prior.
  if (lik.malicious == lik.benign) return d;

  // Each observation branch maps the (sorted) support through a monotone
  // posterior, so the branches come out sorted and only need merging.
  std::vector<SupportPoint> pts;
  pts.reserve(d.size() * lik.malicious.size());
  for (Symbol y = 0; y < lik.malicious.size(); ++y) {
    const double my = lik.malicious[y];
    if (!(my > 0.0)) continue;
    const auto mid = static_cast<std::ptrdiff_t>(pts.size());
    for (const auto& p : d.support_) {
      pts.push_back({bayes_update(p.belief, y, lik), p.weight * my});
    }
    if (!std::is_sorted(pts.begin() + mid, pts.end(), by_mass)) {
      std::stable_sort(pts.begin() + mid, pts.end(), by_mass);
    }
    std::inplace_merge(pts.begin(), pts.begin() + mid, pts.end(), by_mass);
  }
  if (pts.empty()) throw DomainError("malicious likelihood has no positive entry");

  BeliefDistribution out;
  out.support_ = merge_sorted(pts, tol);
  const double dropped = cap_and_normalize(out.support_, max_support);
  out.discarded_weight_ = d.discarded_weight_ + (1.0 - d.discarded_weight_) * dropped;
  return out;
}

double estimated_belief(const BeliefDistribution& d) {
  double mean = 0.0;
  for (const auto& p : d.support()) mean += p.weight * p.belief.malicious();
  return mean;
}

double g_factor(const LikelihoodPair& lik, Belief prior) {
  if (lik.malicious.size() != lik.benign.size()) {
    throw DomainError("likelihood vectors must have equal length");
  }
  double g = 0.0;
  for (std::size_t y = 0; y < lik.malicious.size(); ++y) {
    const double m = lik.malicious[y];
    if (!(m > 0.0)) continue;
    const double den = lik.benign[y] * prior.benign() + m * prior.malicious();
    if (!(den > 0.0)) throw DegenerateLikelihood("zero denominator in growth factor");
    g += m * m / den;
  }
  return g;
}

double growth_g(double alpha, const LikelihoodPair& lik) {
  double g = 0.0;
  for (std::size_t y = 0; y < lik.malicious.size(); ++y) {
    const double m = lik.malicious[y];
    if (!(m > 0.0)) continue;
    const double den = alpha * m + (1.0 - alpha) * lik.benign[y];
    if (!(den > 0.0)) throw DegenerateLikelihood("zero denominator in g");
    g += m * m / den;
  }
  return g;
}

double growth_h(double alpha, const LikelihoodPair& lik) {
  double h = 0.0;
  for (std::size_t y = 0; y < lik.malicious.size(); ++y) {
    const double m = lik.malicious[y];
    const double b = lik.benign[y];
    if (!(m > 0.0 && b > 0.0)) continue;
    h += m * b / (alpha * m + (1.0 - alpha) * b);
  }
  return h;
}

double weighted_geometric_sum(double alpha, const LikelihoodPair& lik) {
  double s = 0.0;
  for (std::size_t y = 0; y < lik.malicious.size(); ++y) {
    s += std::pow(lik.malicious[y], 1.0 - alpha) * std::pow(lik.benign[y], alpha);
  }
  return s;
}

double oracle_estimated_belief(const Scenario& s, std::span<const Symbol> actions,
                               std::span<const Symbol> inputs, std::size_t horizon_bound) {
  if (actions.size() != inputs.size()) {
    throw DomainError("oracle needs one action per input");
  }
  const std::size_t k = actions.size();
  if (k > horizon_bound) {
    throw HorizonTooLarge("oracle horizon " + std::to_string(k) + " exceeds bound " +
                          std::to_string(horizon_bound));
  }
  const std::size_t ny = s.alphabets.y.size();

  std::vector<LikelihoodPair> liks;
  liks.reserve(k);
  for (std::size_t t = 0; t < k; ++t) liks.push_back(likelihood_pair(s, inputs[t], actions[t]));

  std::size_t histories = 1;
  for (std::size_t t = 0; t < k; ++t) histories *= ny;

  double mean = 0.0;
  std::vector<Symbol> ys(k);
  for (std::size_t h = 0; h < histories; ++h) {
    std::size_t code = h;
    for (std::size_t t = 0; t < k; ++t) {
      ys[t] = code % ny;
      code /= ny;
    }
    double weight = 1.0;
    for (std::size_t t = 0; t < k && weight > 0.0; ++t) weight *= liks[t].malicious[ys[t]];
    if (weight == 0.0) continue;
    Belief b(s.initial_belief_malicious);
    for (std::size_t t = 0; t < k; ++t) b = bayes_update(b, ys[t], liks[t]);
    mean += weight * b.malicious();
  }
  return mean;
}

}  // namespace covert
