#pragma once

// Verification battery behind `covert verify`: standing assumptions, the
// monotone estimated belief along simulated paths, the growth-factor bound,
// recursion-vs-enumeration agreement and the threshold structure of the
// sender's best response.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covert/model.hpp"

namespace covert {

enum class CheckStatus { kPass, kFail, kSkip, kWarn };

std::string_view to_string(CheckStatus s);

struct CheckOutcome {
  std::string name;
  CheckStatus status = CheckStatus::kSkip;
  std::string detail;
};

struct VerifyConfig {
  std::size_t seeds = 10;               // simulated paths for the path checks
  std::uint64_t base_seed = 0;          // path i uses trial_seed(base_seed, i)
  std::size_t g_draws = 100000;         // random (m, b, pi) draws
  std::size_t oracle_cases = 20;        // random action/input prefixes per horizon
  std::size_t oracle_max_horizon = 6;
  std::size_t threshold_grid = 10000;
  double monotone_tol = 1e-10;
  double g_tol = 1e-12;
  double oracle_tol = 1e-12;
};

struct VerifyReport {
  std::vector<CheckOutcome> checks;

  // kWarn does not fail the report; it marks finite-horizon diagnostics.
  bool passed() const;
};

VerifyReport run_verification(const Scenario& s, const VerifyConfig& config = {});

// `check,status,detail` lines under a header of the same names.
void write_report(const VerifyReport& report, std::ostream& out);

// Action chosen by solve_stage at pi_hat = (i + 0.5) / grid for i in [0, grid).
std::vector<Symbol> stage_action_sweep(const Scenario& s, Symbol u, std::size_t grid);

}  // namespace covert
