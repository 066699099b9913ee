#include "covert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "covert/belief.hpp"
#include "covert/engine.hpp"
#include "covert/strategy.hpp"

namespace covert {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kSkip:
      return "skip";
    case CheckStatus::kWarn:
      return "warn";
  }
  return "unknown";
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckOutcome& c) { return c.status == CheckStatus::kFail; });
}

std::vector<Symbol> stage_action_sweep(const Scenario& s, Symbol u, std::size_t grid) {
  std::vector<Symbol> actions(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double pi = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    actions[i] = solve_stage(pi, u, s).malicious_action;
  }
  return actions;
}

namespace {

std::vector<double> random_pmf(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& v : p) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

CheckOutcome check_assumptions(const Scenario& s) {
  const auto report = validate_scenario(s);
  if (report.ok()) return {"assumptions", CheckStatus::kPass, "all standing assumptions hold"};
  std::string detail;
  for (const auto& v : report.violations) {
    if (!detail.empty()) detail += "; ";
    detail += std::string(to_string(v.assumption)) + " violated (" + v.witness + ")";
  }
  return {"assumptions", CheckStatus::kFail, detail};
}

void path_checks(const Scenario& s, const VerifyConfig& cfg, VerifyReport& report) {
  std::size_t violations = 0, unconverged = 0, ceiling_hits = 0;
  std::size_t latest = 0;
  std::string first_violation;
  for (std::size_t i = 0; i < cfg.seeds; ++i) {
    const Trajectory t = run_path(s, trial_seed(cfg.base_seed, i));
    const auto audit = monotonicity_audit(t, s.benign_action, cfg.monotone_tol);
    violations += audit.violations.size();
    if (first_violation.empty() && !audit.ok()) {
      first_violation = " first: path " + std::to_string(i) + " step " +
                        std::to_string(audit.violations.front().k) + " " +
                        audit.violations.front().what;
    }
    if (t.convergence_step) {
      latest = std::max(latest, *t.convergence_step);
    } else {
      ++unconverged;
    }
    if (!assumption5_monitor(t).holds) ++ceiling_hits;
  }
  const std::string paths = "paths=" + std::to_string(cfg.seeds);
  report.checks.push_back({"monotonicity", violations == 0 ? CheckStatus::kPass : CheckStatus::kFail,
                           "tol=" + fmt(cfg.monotone_tol) + " " + paths +
                               " violations=" + std::to_string(violations) + first_violation});
  report.checks.push_back(
      {"convergence", unconverged == 0 ? CheckStatus::kPass : CheckStatus::kFail,
       "horizon=" + std::to_string(s.horizon) + " " + paths +
           " unconverged=" + std::to_string(unconverged) +
           " latest_step=" + std::to_string(latest)});
  report.checks.push_back(
      {"belief_ceiling", ceiling_hits == 0 ? CheckStatus::kPass : CheckStatus::kWarn,
       "threshold=" + fmt(kDefaultBeliefCeiling) + " " + paths +
           " exceeded=" + std::to_string(ceiling_hits) + " (finite-horizon diagnostic)"});
}

CheckOutcome check_g_factor(const Scenario& s, const VerifyConfig& cfg) {
  Rng rng(splitmix64(cfg.base_seed ^ 0x67666163746f72ULL));
  const std::size_t ny = std::max<std::size_t>(2, s.alphabets.y.size());
  double worst = 1.0;
  std::size_t below = 0;
  for (std::size_t i = 0; i < cfg.g_draws; ++i) {
    LikelihoodPair lik{random_pmf(rng, ny), random_pmf(rng, ny)};
    const Belief pi(std::clamp(rng.uniform(), 1e-9, 1.0 - 1e-9));
    const double g = g_factor(lik, pi);
    worst = std::min(worst, g);
    if (g < 1.0 - cfg.g_tol) ++below;
  }
  double equality_err = 0.0;
  for (Symbol u = 0; u < s.alphabets.u.size(); ++u) {
    const LikelihoodPair lik = likelihood_pair(s, u, s.benign_action);
    for (double pi : {0.01, 0.5, 0.99}) {
      equality_err = std::max(equality_err, std::abs(g_factor(lik, Belief(pi)) - 1.0));
    }
  }
  const bool ok = below == 0 && equality_err <= 1e-14;
  return {"g_factor_bound", ok ? CheckStatus::kPass : CheckStatus::kFail,
          "tol=" + fmt(cfg.g_tol) + " draws=" + std::to_string(cfg.g_draws) +
              " min=" + fmt(worst) + " below=" + std::to_string(below) +
              " equality_err=" + fmt(equality_err)};
}

CheckOutcome check_oracle(const Scenario& s, const VerifyConfig& cfg) {
  Rng rng(splitmix64(cfg.base_seed ^ 0x6f7261636c65ULL));
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t h = 1; h <= cfg.oracle_max_horizon; ++h) {
    for (std::size_t c = 0; c < cfg.oracle_cases; ++c) {
      std::vector<Symbol> inputs(h), actions(h);
      for (std::size_t t = 0; t < h; ++t) {
        inputs[t] = rng.sample(s.inputs.pmf());
        actions[t] = static_cast<Symbol>(rng.uniform() * static_cast<double>(s.alphabets.a.size()));
      }
      auto d = BeliefDistribution::point(Belief(s.initial_belief_malicious));
      for (std::size_t t = 0; t < h; ++t) {
        d = dist_step(d, likelihood_pair(s, inputs[t], actions[t]), s.merge_tolerance);
      }
      const double oracle = oracle_estimated_belief(s, actions, inputs);
      worst = std::max(worst, std::abs(estimated_belief(d) - oracle));
      ++cases;
    }
  }
  return {"oracle_equivalence", worst <= cfg.oracle_tol ? CheckStatus::kPass : CheckStatus::kFail,
          "tol=" + fmt(cfg.oracle_tol) + " cases=" + std::to_string(cases) +
              " max_horizon=" + std::to_string(cfg.oracle_max_horizon) + " max_err=" + fmt(worst)};
}

CheckOutcome check_threshold(const Scenario& s, const VerifyConfig& cfg) {
  if (s.alphabets.a.size() != 2) {
    return {"threshold_single_crossing", CheckStatus::kSkip, "needs a binary action alphabet"};
  }
  std::string detail = "grid=" + std::to_string(cfg.threshold_grid);
  bool ok = true;
  for (Symbol u = 0; u < s.alphabets.u.size(); ++u) {
    const auto actions = stage_action_sweep(s, u, cfg.threshold_grid);
    // Attack below the threshold, benign at and above it.
    auto first_benign = std::find(actions.begin(), actions.end(), s.benign_action);
    const bool monotone =
        std::all_of(first_benign, actions.end(), [&](Symbol a) { return a == s.benign_action; });
    ok = ok && monotone;
    detail += " u=" + s.alphabets.u.label(u) + ":";
    if (!monotone) {
      detail += "not single-crossing";
    } else if (first_benign == actions.end()) {
      detail += "never benign";
    } else {
      const auto i = static_cast<double>(first_benign - actions.begin());
      detail += "threshold~" + fmt((i + 0.5) / static_cast<double>(cfg.threshold_grid));
    }
  }
  return {"threshold_single_crossing", ok ? CheckStatus::kPass : CheckStatus::kFail, detail};
}

}  // namespace

VerifyReport run_verification(const Scenario& s, const VerifyConfig& cfg) {
  check_structure(s);
  VerifyReport report;
  report.checks.push_back(check_assumptions(s));
  if (report.checks.back().status == CheckStatus::kPass) {
    path_checks(s, cfg, report);
  } else {
    for (const char* name : {"monotonicity", "convergence", "belief_ceiling"}) {
      report.checks.push_back({name, CheckStatus::kSkip, "scenario fails standing assumptions"});
    }
  }
  report.checks.push_back(check_g_factor(s, cfg));
  report.checks.push_back(check_oracle(s, cfg));
  report.checks.push_back(check_threshold(s, cfg));
  return report;
}

void write_report(const VerifyReport& report, std::ostream& out) {
  out << "check,status,detail\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << to_string(c.status) << ',' << c.detail << '\n';
  }
}

}  // namespace covert
