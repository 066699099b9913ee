#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace covert::cli {

enum class Command { kRun, kMonteCarlo, kVerify, kOracle };

struct RunConfig {
  Command command = Command::kRun;
  std::optional<std::string> scenario_path;
  std::optional<std::string> preset;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> merge_tolerance;
  std::optional<std::string> out_path;
  std::size_t seeds = 10;
  std::size_t workers = 0;
  std::vector<std::string> oracle_actions;
  std::vector<std::string> oracle_inputs;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Parses `args` (without the program name) and runs the command. Data goes to
// `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace covert::cli
