#pragma once

// Finite description of the repeated signaling game: alphabets, the system
// map x = Sigma(u, a), the memoryless measurement channel lambda(y|x), the
// i.i.d. input process and the per-step utility tables.
//
// All symbols are handled as indices into their (ordered) alphabet. Whenever
// the library has to pick among tied alternatives it picks the lowest index.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covert {

using Symbol = std::size_t;

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kRowDistinctTolerance = 1e-12;

class Alphabet {
 public:
  Alphabet() = default;
  // Throws ScenarioError when empty or when labels repeat.
  explicit Alphabet(std::vector<std::string> labels);

  // {"0", "1", ..., n-1}
  static Alphabet range(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Symbol s) const;
  std::optional<Symbol> find(std::string_view label) const;
  Symbol index_of(std::string_view label) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
};

enum class TypeTag : int { kBenign = 0, kMalicious = 1 };

std::string_view to_string(TypeTag t);

struct Alphabets {
  Alphabet u;  // inputs
  Alphabet x;  // states
  Alphabet y;  // observations
  Alphabet a;  // sender actions
  Alphabet r;  // receiver reactions
};

class SystemMap {
 public:
  SystemMap() = default;
  // `table[u * num_actions + a]` is the state reached from input u and action a.
  SystemMap(std::size_t num_inputs, std::size_t num_actions, std::vector<Symbol> table);

  // The general evaluator signature takes the step and the whole input history
  // u_{0:k} so history-dependent maps can be plugged in later. The table form
  // is time-invariant and reads only the last input.
  Symbol evaluate(std::size_t step, std::span<const Symbol> input_history, Symbol action) const;

  Symbol at(Symbol u, Symbol a) const;

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_actions() const { return num_actions_; }
  const std::vector<Symbol>& table() const { return table_; }

 private:
  std::size_t num_inputs_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<Symbol> table_;
};

// Row-major lambda(y|x): one row per state, one column per observation.
class Channel {
 public:
  Channel() = default;
  // Throws ScenarioError if an entry leaves [0,1] or a row does not sum to 1.
  Channel(std::size_t num_states, std::size_t num_observations, std::vector<double> matrix);

  double prob(Symbol y, Symbol x) const;
  std::span<const double> row(Symbol x) const;

  std::size_t num_states() const { return num_states_; }
  std::size_t num_observations() const { return num_observations_; }
  const std::vector<double>& matrix() const { return matrix_; }

 private:
  std::size_t num_states_ = 0;
  std::size_t num_observations_ = 0;
  std::vector<double> matrix_;
};

class InputProcess {
 public:
  InputProcess() = default;
  explicit InputProcess(std::vector<double> pmf);

  std::span<const double> pmf() const { return pmf_; }
  std::size_t size() const { return pmf_.size(); }

 private:
  std::vector<double> pmf_;
};

// U(theta, x, a, r) for sender and receiver, time-invariant.
class UtilityTable {
 public:
  UtilityTable() = default;
  UtilityTable(std::size_t num_states, std::size_t num_actions, std::size_t num_reactions,
               std::vector<double> sender, std::vector<double> receiver);

  double sender(TypeTag t, Symbol x, Symbol a, Symbol r) const;
  double receiver(TypeTag t, Symbol x, Symbol a, Symbol r) const;

  std::size_t index(TypeTag t, Symbol x, Symbol a, Symbol r) const;
  std::size_t num_entries() const { return 2 * num_states_ * num_actions_ * num_reactions_; }

  const std::vector<double>& sender_values() const { return sender_; }
  const std::vector<double>& receiver_values() const { return receiver_; }

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::size_t num_reactions_ = 0;
  std::vector<double> sender_;
  std::vector<double> receiver_;
};

struct Scenario {
  Alphabets alphabets;
  SystemMap system_map;
  Channel channel;
  InputProcess inputs;
  UtilityTable utilities;
  Symbol benign_action = 0;
  double initial_belief_malicious = 0.5;
  std::size_t horizon = 500;
  double merge_tolerance = 1e-9;
  std::uint64_t seed = 0;
};

// Throws ScenarioError if table shapes disagree with the alphabets, if a mapped
// state is out of range, or if a scalar parameter is out of its domain.
void check_structure(const Scenario& s);

// ---------------------------------------------------------------------------
// Standing-assumption checks. Violations are data, not failures.

struct InputActionWitness {
  Symbol input;
  Symbol action;
};

struct ChannelWitness {
  Symbol input;
  Symbol action;
  Symbol state;         // Sigma(u, a)
  Symbol benign_state;  // Sigma(u, a_b)
};

struct PreferenceWitness {
  Symbol input;
  Symbol action;
  Symbol reaction_benign;  // r paired with a_b
  Symbol reaction_other;   // r' paired with a
};

template <typename Witness>
struct CheckResult {
  bool holds = true;
  std::optional<Witness> witness;
};

// Every non-benign action moves the state away from the benign one.
CheckResult<InputActionWitness> check_input_observability(const Scenario& s);

// For every u and a != a_b the channel rows of Sigma(u,a) and Sigma(u,a_b)
// differ somewhere by more than kRowDistinctTolerance.
CheckResult<ChannelWitness> check_channel_informativeness(const Scenario& s);

// a_b strictly beats every other action for the benign type, whatever the
// reactions paired with either side.
CheckResult<PreferenceWitness> check_benign_preference(const Scenario& s);

enum class Assumption { kInputObservability, kChannelInformativeness, kBenignPreference };

std::string_view to_string(Assumption a);

struct Violation {
  Assumption assumption;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool violates(Assumption a) const;
};

ValidationReport validate_scenario(const Scenario& s);

Symbol system_state(const Scenario& s, Symbol u, Symbol a);
Symbol benign_state(const Scenario& s, Symbol u);

}  // namespace covert
