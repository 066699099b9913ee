#include "covert/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "covert/error.hpp"

namespace covert {

SchemaError::SchemaError(std::vector<SchemaIssue> issues)
    : Error([&] {
        std::string msg = "scenario schema error";
        for (const auto& i : issues) msg += "\n  " + i.path + ": " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ScenarioError("alphabet must not be empty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ScenarioError("duplicate alphabet label '" + l + "'");
  }
}

Alphabet Alphabet::range(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(labels));
}

const std::string& Alphabet::label(Symbol s) const {
  if (s >= labels_.size()) {
    throw DomainError("symbol index " + std::to_string(s) + " outside alphabet of size " +
                      std::to_string(labels_.size()));
  }
  return labels_[s];
}

std::optional<Symbol> Alphabet::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Symbol>(it - labels_.begin());
}

Symbol Alphabet::index_of(std::string_view label) const {
  if (auto s = find(label)) return *s;
  throw DomainError("unknown symbol '" + std::string(label) + "'");
}

std::string_view to_string(TypeTag t) {
  return t == TypeTag::kBenign ? "benign" : "malicious";
}

// ---------------------------------------------------------------------------

SystemMap::SystemMap(std::size_t num_inputs, std::size_t num_actions, std::vector<Symbol> table)
    : num_inputs_(num_inputs), num_actions_(num_actions), table_(std::move(table)) {
  if (table_.size() != num_inputs_ * num_actions_) {
    throw ScenarioError("system map has " + std::to_string(table_.size()) + " entries, expected " +
                        std::to_string(num_inputs_ * num_actions_));
  }
}

Symbol SystemMap::evaluate(std::size_t /*step*/, std::span<const Symbol> input_history,
                           Symbol action) const {
  if (input_history.empty()) throw DomainError("system map evaluated with empty input history");
  return at(input_history.back(), action);
}

Symbol SystemMap::at(Symbol u, Symbol a) const {
  if (u >= num_inputs_) throw DomainError("input index " + std::to_string(u) + " out of range");
  if (a >= num_actions_) throw DomainError("action index " + std::to_string(a) + " out of range");
  return table_[u * num_actions_ + a];
}

Channel::Channel(std::size_t num_states, std::size_t num_observations, std::vector<double> matrix)
    : num_states_(num_states), num_observations_(num_observations), matrix_(std::move(matrix)) {
  if (matrix_.size() != num_states_ * num_observations_) {
    throw ScenarioError("channel matrix has " + std::to_string(matrix_.size()) +
                        " entries, expected " + std::to_string(num_states_ * num_observations_));
  }
  for (std::size_t x = 0; x < num_states_; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < num_observations_; ++y) {
      double p = matrix_[x * num_observations_ + y];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ScenarioError("channel row " + std::to_string(x) + " has entry outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream os;
      os << "channel row " << x << " sums to " << sum;
      throw ScenarioError(os.str());
    }
  }
}

double Channel::prob(Symbol y, Symbol x) const {
  if (x >= num_states_) throw DomainError("state index " + std::to_string(x) + " out of range");
  if (y >= num_observations_) {
    throw DomainError("observation index " + std::to_string(y) + " out of range");
  }
  return matrix_[x * num_observations_ + y];
}

std::span<const double> Channel::row(Symbol x) const {
  if (x >= num_states_) throw DomainError("state index " + std::to_string(x) + " out of range");
  return std::span<const double>(matrix_).subspan(x * num_observations_, num_observations_);
}

InputProcess::InputProcess(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw ScenarioError("input pmf must not be empty");
  double sum = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0)) throw ScenarioError("input pmf has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) throw ScenarioError("input pmf does not sum to 1");
}

UtilityTable::UtilityTable(std::size_t num_states, std::size_t num_actions,
                           std::size_t num_reactions, std::vector<double> sender,
                           std::vector<double> receiver)
    : num_states_(num_states),
      num_actions_(num_actions),
      num_reactions_(num_reactions),
      sender_(std::move(sender)),
      receiver_(std::move(receiver)) {
  if (sender_.size() != num_entries() || receiver_.size() != num_entries()) {
    throw ScenarioError("utility tables must have " + std::to_string(num_entries()) + " entries");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(sender_.begin(), sender_.end(), finite) ||
      !std::all_of(receiver_.begin(), receiver_.end(), finite)) {
    throw ScenarioError("utility tables must be finite");
  }
}

std::size_t UtilityTable::index(TypeTag t, Symbol x, Symbol a, Symbol r) const {
  if (x >= num_states_ || a >= num_actions_ || r >= num_reactions_) {
    throw DomainError("utility index out of range");
  }
  auto th = static_cast<std::size_t>(t);
  return ((th * num_states_ + x) * num_actions_ + a) * num_reactions_ + r;
}

double UtilityTable::sender(TypeTag t, Symbol x, Symbol a, Symbol r) const {
  return sender_[index(t, x, a, r)];
}

double UtilityTable::receiver(TypeTag t, Symbol x, Symbol a, Symbol r) const {
  return receiver_[index(t, x, a, r)];
}

// ---------------------------------------------------------------------------

void check_structure(const Scenario& s) {
  const auto& al = s.alphabets;
  for (const Alphabet* a : {&al.u, &al.x, &al.y, &al.a, &al.r}) {
    if (a->size() == 0) throw ScenarioError("every alphabet must be non-empty");
  }
  if (s.system_map.num_inputs() != al.u.size() || s.system_map.num_actions() != al.a.size()) {
    throw ScenarioError("system map shape does not match the input/action alphabets");
  }
  for (Symbol x : s.system_map.table()) {
    if (x >= al.x.size()) throw ScenarioError("system map produces a state outside the state alphabet");
  }
  if (s.channel.num_states() != al.x.size() || s.channel.num_observations() != al.y.size()) {
    throw ScenarioError("channel shape does not match the state/observation alphabets");
  }
  if (s.inputs.size() != al.u.size()) throw ScenarioError("input pmf size does not match inputs");
  if (s.utilities.num_entries() != 2 * al.x.size() * al.a.size() * al.r.size()) {
    throw ScenarioError("utility table shape does not match the alphabets");
  }
  if (s.benign_action >= al.a.size()) throw ScenarioError("benign action outside action alphabet");
  if (!(s.initial_belief_malicious > 0.0 && s.initial_belief_malicious < 1.0)) {
    throw ScenarioError("initial malicious belief must lie in (0,1)");
  }
  if (!(s.merge_tolerance >= 0.0)) throw ScenarioError("merge tolerance must be nonnegative");
}

Symbol system_state(const Scenario& s, Symbol u, Symbol a) { return s.system_map.at(u, a); }

Symbol benign_state(const Scenario& s, Symbol u) { return system_state(s, u, s.benign_action); }

CheckResult<InputActionWitness> check_input_observability(const Scenario& s) {
  for (Symbol u = 0; u < s.alphabets.u.size(); ++u) {
    const Symbol xb = benign_state(s, u);
    for (Symbol a = 0; a < s.alphabets.a.size(); ++a) {
      if (a == s.benign_action) continue;
      if (system_state(s, u, a) == xb) return {false, InputActionWitness{u, a}};
    }
  }
  return {};
}

CheckResult<ChannelWitness> check_channel_informativeness(const Scenario& s) {
  for (Symbol u = 0; u < s.alphabets.u.size(); ++u) {
    const Symbol xb = benign_state(s, u);
    const auto benign_row = s.channel.row(xb);
    for (Symbol a = 0; a < s.alphabets.a.size(); ++a) {
      if (a == s.benign_action) continue;
      const Symbol x = system_state(s, u, a);
      const auto row = s.channel.row(x);
      bool distinct = false;
      for (std::size_t y = 0; y < row.size(); ++y) {
        if (std::abs(row[y] - benign_row[y]) > kRowDistinctTolerance) {
          distinct = true;
          break;
        }
      }
      if (!distinct) return {false, ChannelWitness{u, a, x, xb}};
    }
  }
  return {};
}

CheckResult<PreferenceWitness> check_benign_preference(const Scenario& s) {
  const auto& al = s.alphabets;
  for (Symbol u = 0; u < al.u.size(); ++u) {
    const Symbol xb = benign_state(s, u);
    for (Symbol a = 0; a < al.a.size(); ++a) {
      if (a == s.benign_action) continue;
      const Symbol x = system_state(s, u, a);
      for (Symbol r = 0; r < al.r.size(); ++r) {
        const double benign = s.utilities.sender(TypeTag::kBenign, xb, s.benign_action, r);
        for (Symbol rp = 0; rp < al.r.size(); ++rp) {
          if (!(benign > s.utilities.sender(TypeTag::kBenign, x, a, rp))) {
            return {false, PreferenceWitness{u, a, r, rp}};
          }
        }
      }
    }
  }
  return {};
}

std::string_view to_string(Assumption a) {
  switch (a) {
    case Assumption::kInputObservability:
      return "input_observability";
    case Assumption::kChannelInformativeness:
      return "channel_informativeness";
    case Assumption::kBenignPreference:
      return "benign_preference";
  }
  return "unknown";
}

bool ValidationReport::violates(Assumption a) const {
  return std::any_of(violations.begin(), violations.end(),
                     [a](const Violation& v) { return v.assumption == a; });
}

ValidationReport validate_scenario(const Scenario& s) {
  const auto& al = s.alphabets;
  ValidationReport report;
  if (auto c = check_input_observability(s); !c.holds) {
    report.violations.push_back(
        {Assumption::kInputObservability,
         "u=" + al.u.label(c.witness->input) + " a=" + al.a.label(c.witness->action)});
  }
  if (auto c = check_channel_informativeness(s); !c.holds) {
    const auto& w = *c.witness;
    report.violations.push_back({Assumption::kChannelInformativeness,
                                 "u=" + al.u.label(w.input) + " a=" + al.a.label(w.action) +
                                     " x=" + al.x.label(w.state) +
                                     " x_b=" + al.x.label(w.benign_state)});
  }
  if (auto c = check_benign_preference(s); !c.holds) {
    const auto& w = *c.witness;
    report.violations.push_back(
        {Assumption::kBenignPreference,
         "u=" + al.u.label(w.input) + " a=" + al.a.label(w.action) +
             " r=" + al.r.label(w.reaction_benign) + " r'=" + al.r.label(w.reaction_other)});
  }
  return report;
}

}  // namespace covert
