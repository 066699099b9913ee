#pragma once

// Random scenarios satisfying the standing assumptions, for property suites.

#include <algorithm>
#include <random>
#include <vector>

#include "covert/belief.hpp"
#include "covert/model.hpp"

namespace covert::testing {

inline double uniform(std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::size_t pick(std::mt19937_64& gen, std::size_t n) { return gen() % n; }

// Entries bounded below by `floor` before normalization.
inline std::vector<double> random_pmf(std::mt19937_64& gen, std::size_t n, double floor = 0.05) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& v : p) {
    v = floor + uniform(gen);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  // Push the rounding residue into the largest entry so the row sums to 1.
  double total = 0.0;
  for (double v : p) total += v;
  *std::max_element(p.begin(), p.end()) += 1.0 - total;
  return p;
}

struct ScenarioShape {
  std::size_t max_alphabet = 4;
};

inline Scenario random_scenario(std::mt19937_64& gen, ScenarioShape shape = {}) {
  const auto size = [&](std::size_t lo) { return lo + pick(gen, shape.max_alphabet - lo + 1); };
  const std::size_t nu = size(1), nx = size(2), ny = size(2), na = size(2), nr = size(1);

  Scenario s;
  s.alphabets = {Alphabet::range(nu), Alphabet::range(nx), Alphabet::range(ny),
                 Alphabet::range(na), Alphabet::range(nr)};
  s.benign_action = pick(gen, na);

  std::vector<Symbol> table(nu * na);
  for (Symbol u = 0; u < nu; ++u) {
    const Symbol xb = pick(gen, nx);
    for (Symbol a = 0; a < na; ++a) {
      if (a == s.benign_action) {
        table[u * na + a] = xb;
      } else {
        table[u * na + a] = (xb + 1 + pick(gen, nx - 1)) % nx;
      }
    }
  }
  s.system_map = SystemMap(nu, na, std::move(table));

  std::vector<double> channel;
  for (Symbol x = 0; x < nx; ++x) {
    auto row = random_pmf(gen, ny);
    channel.insert(channel.end(), row.begin(), row.end());
  }
  s.channel = Channel(nx, ny, std::move(channel));
  s.inputs = InputProcess(random_pmf(gen, nu));

  const std::size_t n = 2 * nx * na * nr;
  std::vector<double> sender(n), receiver(n);
  UtilityTable shape_only(nx, na, nr, sender, receiver);
  for (Symbol x = 0; x < nx; ++x) {
    for (Symbol a = 0; a < na; ++a) {
      for (Symbol r = 0; r < nr; ++r) {
        sender[shape_only.index(TypeTag::kBenign, x, a, r)] =
            a == s.benign_action ? uniform(gen, 2.0, 3.0) : uniform(gen, 0.0, 1.0);
        sender[shape_only.index(TypeTag::kMalicious, x, a, r)] = uniform(gen, -1.0, 3.0);
        receiver[shape_only.index(TypeTag::kBenign, x, a, r)] = uniform(gen, -1.0, 3.0);
        receiver[shape_only.index(TypeTag::kMalicious, x, a, r)] = uniform(gen, -1.0, 3.0);
      }
    }
  }
  s.utilities = UtilityTable(nx, na, nr, std::move(sender), std::move(receiver));
  s.initial_belief_malicious = uniform(gen, 0.05, 0.95);
  s.horizon = 20;
  s.merge_tolerance = kDefaultMergeTolerance;
  s.seed = gen();
  return s;
}

// Random distribution with 1..max_points support points in [lo, hi].
inline BeliefDistribution random_distribution(std::mt19937_64& gen, std::size_t max_points = 5,
                                              double lo = 0.01, double hi = 0.99) {
  std::vector<SupportPoint> pts(1 + pick(gen, max_points));
  for (auto& p : pts) p = {Belief(uniform(gen, lo, hi)), uniform(gen, 0.1, 1.0)};
  return merge_support(std::move(pts), kDefaultMergeTolerance);
}

}  // namespace covert::testing
