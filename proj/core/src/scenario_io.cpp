#include "covert/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "covert/error.hpp"
#include "json.hpp"

namespace covert {

using nlohmann::json;

namespace {

class Reader {
 public:
  void issue(std::string path, std::string message) {
    issues_.push_back({std::move(path), std::move(message)});
  }
  bool failed() const { return !issues_.empty(); }
  [[noreturn]] void raise() { throw SchemaError(std::move(issues_)); }

  const json* field(const json& doc, const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
      issue(key, "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> label(const json& v, const std::string& path) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    issue(path, "symbol must be a string or an integer");
    return std::nullopt;
  }

  std::optional<Symbol> symbol(const json& v, const Alphabet& alphabet, const std::string& path) {
    auto l = label(v, path);
    if (!l) return std::nullopt;
    if (auto s = alphabet.find(*l)) return s;
    issue(path, "unknown symbol '" + *l + "'");
    return std::nullopt;
  }

  std::optional<double> number(const json& v, const std::string& path) {
    if (!v.is_number()) {
      issue(path, "expected a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      issue(path, "expected a finite number");
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::vector<double>> pmf(const json& v, std::size_t size, const std::string& path) {
    if (!v.is_array() || v.size() != size) {
      issue(path, "expected an array of " + std::to_string(size) + " numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto d = number(v[i], path + "[" + std::to_string(i) + "]");
      if (!d) {
        ok = false;
        continue;
      }
      if (*d < 0.0 || *d > 1.0) {
        issue(path + "[" + std::to_string(i) + "]", "probability outside [0,1]");
        ok = false;
      }
      sum += *d;
      out.push_back(*d);
    }
    if (!ok) return std::nullopt;
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row sums to " << sum << ", expected 1";
      issue(path, os.str());
      return std::nullopt;
    }
    return out;
  }

 private:
  std::vector<SchemaIssue> issues_;
};

std::optional<Alphabet> read_alphabet(Reader& rd, const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    rd.issue(path, "expected a non-empty array of labels");
    return std::nullopt;
  }
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> seen;
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto l = rd.label(v[i], p);
    if (!l) {
      ok = false;
      continue;
    }
    if (!seen.emplace(*l, i).second) {
      rd.issue(p, "duplicate label '" + *l + "'");
      ok = false;
    }
    labels.push_back(*l);
  }
  if (!ok) return std::nullopt;
  return Alphabet(std::move(labels));
}

std::optional<TypeTag> read_type(Reader& rd, const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "benign" || s == "b") return TypeTag::kBenign;
    if (s == "malicious" || s == "m") return TypeTag::kMalicious;
  }
  rd.issue(path, "type must be \"benign\" or \"malicious\"");
  return std::nullopt;
}

std::optional<std::vector<double>> read_utilities(Reader& rd, const json& v, const Alphabets& al,
                                                  const std::string& path) {
  if (!v.is_array()) {
    rd.issue(path, "expected an array of [theta, x, a, r, value]");
    return std::nullopt;
  }
  const std::size_t nx = al.x.size(), na = al.a.size(), nr = al.r.size();
  const std::size_t n = 2 * nx * na * nr;
  std::vector<double> values(n, 0.0);
  std::vector<bool> seen(n, false);
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& e = v[i];
    if (!e.is_array() || e.size() != 5) {
      rd.issue(p, "expected [theta, x, a, r, value]");
      ok = false;
      continue;
    }
    auto th = read_type(rd, e[0], p + "[0]");
    auto x = rd.symbol(e[1], al.x, p + "[1]");
    auto a = rd.symbol(e[2], al.a, p + "[2]");
    auto r = rd.symbol(e[3], al.r, p + "[3]");
    auto val = rd.number(e[4], p + "[4]");
    if (!th || !x || !a || !r || !val) {
      ok = false;
      continue;
    }
    const std::size_t idx = ((static_cast<std::size_t>(*th) * nx + *x) * na + *a) * nr + *r;
    if (seen[idx]) {
      rd.issue(p, "duplicate utility tuple");
      ok = false;
      continue;
    }
    seen[idx] = true;
    values[idx] = *val;
  }
  if (!ok) return std::nullopt;
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (seen[idx]) continue;
    std::size_t rest = idx;
    const std::size_t r = rest % nr;
    rest /= nr;
    const std::size_t a = rest % na;
    rest /= na;
    const std::size_t x = rest % nx;
    const auto th = static_cast<TypeTag>(rest / nx);
    rd.issue(path, "missing utility for (" + std::string(to_string(th)) + ", x=" + al.x.label(x) +
                       ", a=" + al.a.label(a) + ", r=" + al.r.label(r) + ")");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return values;
}

}  // namespace

Scenario parse_scenario(std::string_view document) {
  Reader rd;
  json doc = json::parse(document.begin(), document.end(), nullptr, false);
  if (doc.is_discarded()) {
    rd.issue("$", "document is not valid JSON");
    rd.raise();
  }
  if (!doc.is_object()) {
    rd.issue("$", "document must be a JSON object");
    rd.raise();
  }

  Scenario s;
  bool alphabets_ok = false;
  if (const json* al = rd.field(doc, "alphabets")) {
    if (!al->is_object()) {
      rd.issue("alphabets", "expected an object with keys u, x, y, a, r");
    } else {
      std::optional<Alphabet> parts[5];
      const char* keys[5] = {"u", "x", "y", "a", "r"};
      alphabets_ok = true;
      for (int i = 0; i < 5; ++i) {
        auto it = al->find(keys[i]);
        const std::string path = std::string("alphabets.") + keys[i];
        if (it == al->end()) {
          rd.issue(path, "missing field");
        } else {
          parts[i] = read_alphabet(rd, *it, path);
        }
        alphabets_ok = alphabets_ok && parts[i].has_value();
      }
      if (alphabets_ok) s.alphabets = {*parts[0], *parts[1], *parts[2], *parts[3], *parts[4]};
    }
  }

  const json* sysmap = rd.field(doc, "system_map");
  const json* channel = rd.field(doc, "channel");
  const json* input_pmf = rd.field(doc, "input_pmf");
  const json* us = rd.field(doc, "utility_sender");
  const json* ur = rd.field(doc, "utility_receiver");
  const json* benign = rd.field(doc, "benign_action");
  const json* pi0 = rd.field(doc, "pi0_malicious");
  const json* horizon = rd.field(doc, "horizon");
  const json* tol = rd.field(doc, "merge_tolerance");
  const json* seed = rd.field(doc, "seed");

  if (pi0) {
    if (auto v = rd.number(*pi0, "pi0_malicious")) {
      if (*v > 0.0 && *v < 1.0) {
        s.initial_belief_malicious = *v;
      } else {
        rd.issue("pi0_malicious", "must lie strictly between 0 and 1");
      }
    }
  }
  if (horizon) {
    if (horizon->is_number_unsigned()) {
      s.horizon = horizon->get<std::size_t>();
    } else {
      rd.issue("horizon", "expected a nonnegative integer");
    }
  }
  if (tol) {
    if (auto v = rd.number(*tol, "merge_tolerance")) {
      if (*v >= 0.0) {
        s.merge_tolerance = *v;
      } else {
        rd.issue("merge_tolerance", "must be nonnegative");
      }
    }
  }
  if (seed) {
    if (seed->is_number_unsigned()) {
      s.seed = seed->get<std::uint64_t>();
    } else {
      rd.issue("seed", "expected an unsigned integer");
    }
  }

  if (!alphabets_ok) rd.raise();
  const auto& al = s.alphabets;

  if (benign) {
    if (auto a = rd.symbol(*benign, al.a, "benign_action")) s.benign_action = *a;
  }

  if (sysmap) {
    if (!sysmap->is_array()) {
      rd.issue("system_map", "expected an array of [u, a, x] triples");
    } else {
      const std::size_t nu = al.u.size(), na = al.a.size();
      std::vector<std::optional<Symbol>> table(nu * na);
      bool ok = true;
      for (std::size_t i = 0; i < sysmap->size(); ++i) {
        const std::string p = "system_map[" + std::to_string(i) + "]";
        const json& e = (*sysmap)[i];
        if (!e.is_array() || e.size() != 3) {
          rd.issue(p, "expected [u, a, x]");
          ok = false;
          continue;
        }
        auto u = rd.symbol(e[0], al.u, p + "[0]");
        auto a = rd.symbol(e[1], al.a, p + "[1]");
        auto x = rd.symbol(e[2], al.x, p + "[2]");
        if (!u || !a || !x) {
          ok = false;
          continue;
        }
        auto& slot = table[*u * na + *a];
        if (slot) {
          rd.issue(p, "duplicate entry for (u=" + al.u.label(*u) + ", a=" + al.a.label(*a) + ")");
          ok = false;
          continue;
        }
        slot = *x;
      }
      for (std::size_t u = 0; u < nu && ok; ++u) {
        for (std::size_t a = 0; a < na; ++a) {
          if (!table[u * na + a]) {
            rd.issue("system_map",
                     "missing entry for (u=" + al.u.label(u) + ", a=" + al.a.label(a) + ")");
            ok = false;
          }
        }
      }
      if (ok) {
        std::vector<Symbol> flat;
        for (const auto& e : table) flat.push_back(*e);
        s.system_map = SystemMap(nu, na, std::move(flat));
      }
    }
  }

  if (channel) {
    if (!channel->is_array() || channel->size() != al.x.size()) {
      rd.issue("channel", "expected " + std::to_string(al.x.size()) + " rows (one per state)");
    } else {
      std::vector<double> flat;
      bool ok = true;
      for (std::size_t x = 0; x < al.x.size(); ++x) {
        auto row = rd.pmf((*channel)[x], al.y.size(), "channel[" + std::to_string(x) + "]");
        if (!row) {
          ok = false;
          continue;
        }
        flat.insert(flat.end(), row->begin(), row->end());
      }
      if (ok) s.channel = Channel(al.x.size(), al.y.size(), std::move(flat));
    }
  }

  if (input_pmf) {
    if (auto p = rd.pmf(*input_pmf, al.u.size(), "input_pmf")) s.inputs = InputProcess(std::move(*p));
  }

  std::optional<std::vector<double>> sender, receiver;
  if (us) sender = read_utilities(rd, *us, al, "utility_sender");
  if (ur) receiver = read_utilities(rd, *ur, al, "utility_receiver");
  if (sender && receiver) {
    s.utilities = UtilityTable(al.x.size(), al.a.size(), al.r.size(), std::move(*sender),
                               std::move(*receiver));
  }

  if (rd.failed()) rd.raise();
  check_structure(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError({{"$", "cannot open scenario file '" + path + "'"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_document(const Scenario& s) {
  const auto& al = s.alphabets;
  json doc;
  doc["alphabets"] = {{"u", al.u.labels()}, {"x", al.x.labels()}, {"y", al.y.labels()},
                      {"a", al.a.labels()}, {"r", al.r.labels()}};
  json sysmap = json::array();
  for (Symbol u = 0; u < al.u.size(); ++u) {
    for (Symbol a = 0; a < al.a.size(); ++a) {
      sysmap.push_back({al.u.label(u), al.a.label(a), al.x.label(s.system_map.at(u, a))});
    }
  }
  doc["system_map"] = std::move(sysmap);
  json channel = json::array();
  for (Symbol x = 0; x < al.x.size(); ++x) {
    const auto row = s.channel.row(x);
    channel.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["channel"] = std::move(channel);
  doc["input_pmf"] = std::vector<double>(s.inputs.pmf().begin(), s.inputs.pmf().end());
  json sender = json::array(), receiver = json::array();
  for (TypeTag th : {TypeTag::kBenign, TypeTag::kMalicious}) {
    for (Symbol x = 0; x < al.x.size(); ++x) {
      for (Symbol a = 0; a < al.a.size(); ++a) {
        for (Symbol r = 0; r < al.r.size(); ++r) {
          const std::string t(to_string(th));
          sender.push_back({t, al.x.label(x), al.a.label(a), al.r.label(r),
                            s.utilities.sender(th, x, a, r)});
          receiver.push_back({t, al.x.label(x), al.a.label(a), al.r.label(r),
                              s.utilities.receiver(th, x, a, r)});
        }
      }
    }
  }
  doc["utility_sender"] = std::move(sender);
  doc["utility_receiver"] = std::move(receiver);
  doc["benign_action"] = al.a.label(s.benign_action);
  doc["pi0_malicious"] = s.initial_belief_malicious;
  doc["horizon"] = s.horizon;
  doc["merge_tolerance"] = s.merge_tolerance;
  doc["seed"] = s.seed;
  return doc.dump(2);
}

std::string example_sec4_document(double lambda, double threshold, double pi0) {
  const double alpha = (1.0 - threshold) / threshold;
  json doc;
  doc["alphabets"] = {{"u", {0, 1}}, {"x", {0, 1}}, {"y", {0, 1}}, {"a", {0, 1}}, {"r", {0, 1}}};
  doc["system_map"] = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  doc["channel"] = {{lambda, 1.0 - lambda}, {1.0 - lambda, lambda}};
  doc["input_pmf"] = {0.5, 0.5};
  json sender = json::array(), receiver = json::array();
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      for (int r = 0; r < 2; ++r) {
        sender.push_back({"benign", x, a, r, a == 0 ? 1.0 : 0.0});
        const double mal = a == 1 ? (r == 0 ? 3.0 : 0.0) : (r == 0 ? 2.0 : 1.0);
        sender.push_back({"malicious", x, a, r, mal});
        receiver.push_back({"benign", x, a, r, r == 0 ? 1.0 : 0.0});
        receiver.push_back({"malicious", x, a, r, r == 1 ? alpha : 0.0});
      }
    }
  }
  doc["utility_sender"] = std::move(sender);
  doc["utility_receiver"] = std::move(receiver);
  doc["benign_action"] = 0;
  doc["pi0_malicious"] = pi0;
  doc["horizon"] = 500;
  doc["merge_tolerance"] = kDefaultMergeTolerance;
  doc["seed"] = 42;
  return doc.dump(2);
}

std::vector<std::string> preset_names() { return {"example_sec4"}; }

std::string preset_document(std::string_view name) {
  if (name == "example_sec4") return example_sec4_document();
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

Scenario preset(std::string_view name) { return parse_scenario(preset_document(name)); }

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::size_t write_all(std::ostream& out, const std::string& text) {
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing CSV output");
  return text.size();
}

}  // namespace

std::size_t emit_trajectory_csv(const Trajectory& t, const Alphabets& al, std::ostream& out) {
  std::string text = "k,u,action,x,y,pi_true_m,pi_hat_m,reaction,fixed_point\n";
  for (const auto& r : t.steps) {
    text += std::to_string(r.k);
    text += ',' + al.u.label(r.input);
    text += ',' + al.a.label(r.action);
    text += ',' + al.x.label(r.state);
    text += ',' + al.y.label(r.observation);
    text += ',' + format_real(r.pi_true);
    text += ',' + format_real(r.pi_hat);
    text += ',' + al.r.label(r.reaction);
    text += r.fixed_point ? ",1\n" : ",0\n";
  }
  return write_all(out, text);
}

std::size_t emit_summary_csv(const MonteCarloSummary& m, std::ostream& out) {
  std::string text = "k,pi_hat_m,emp_mean_pi_true_m,emp_var\n";
  for (std::size_t k = 0; k < m.mean_pi_true.size(); ++k) {
    text += std::to_string(k) + ',' + format_real(m.pi_hat[k]) + ',' +
            format_real(m.mean_pi_true[k]) + ',' + format_real(m.var_pi_true[k]) + '\n';
  }
  return write_all(out, text);
}

}  // namespace covert
