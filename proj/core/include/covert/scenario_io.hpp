#pragma once

// Scenario documents (JSON) and the CSV artifacts emitted by the tools.
//
// Scenario document fields:
//   alphabets        {"u": [...], "x": [...], "y": [...], "a": [...], "r": [...]}
//                    labels are strings or integers
//   system_map       [[u, a, x], ...]        one triple per (u, a)
//   channel          [[lambda(y|x) for y] for x]  rows in state order
//   input_pmf        [p(u) for u]
//   utility_sender   [[theta, x, a, r, value], ...]  every tuple present,
//   utility_receiver                                 theta "benign"/"malicious"
//   benign_action    label
//   pi0_malicious    number in (0,1)
//   horizon          integer >= 0
//   merge_tolerance  number >= 0
//   seed             unsigned integer

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "covert/engine.hpp"
#include "covert/model.hpp"

namespace covert {

// Throws SchemaError listing every problem found, each with its field path.
Scenario parse_scenario(std::string_view document);

Scenario load_scenario_file(const std::string& path);

// Inverse of parse_scenario.
std::string scenario_document(const Scenario& s);

// Built-in scenarios usable without any file.
std::vector<std::string> preset_names();
// Throws DomainError for unknown names.
std::string preset_document(std::string_view name);
Scenario preset(std::string_view name);

// Binary example: x = u xor a, symmetric channel with crossover 1 - lambda,
// receiver reacts aggressively once its malicious belief reaches `threshold`.
std::string example_sec4_document(double lambda = 0.55, double threshold = 0.85,
                                  double pi0 = 0.15);

// %.12g, the float format of every CSV we write.
std::string format_real(double v);

// Header `k,u,action,x,y,pi_true_m,pi_hat_m,reaction,fixed_point`, one row
// per step, '\n' line ends. Returns the number of bytes written; throws
// std::runtime_error if the stream fails.
std::size_t emit_trajectory_csv(const Trajectory& t, const Alphabets& alphabets, std::ostream& out);

// Header `k,pi_hat_m,emp_mean_pi_true_m,emp_var`.
std::size_t emit_summary_csv(const MonteCarloSummary& m, std::ostream& out);

}  // namespace covert
