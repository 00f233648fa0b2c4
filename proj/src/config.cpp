#include "qrwa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace qrwa {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct RawValue {
  std::string value;
  int line = 0;
};

// Parsed key/value store with consumption tracking: every schema key is
// fetched exactly once, and anything left unconsumed is an unknown key.
class KeyStore {
 public:
  void insert(const std::string& section, const std::string& key,
              std::string value, int line) {
    const std::string full = section + "." + key;
    if (entries_.count(full))
      throw ConfigError("config line " + std::to_string(line) +
                        ": duplicate key '" + full + "'");
    entries_[full] = RawValue{std::move(value), line};
  }

  const RawValue& require(const std::string& full) {
    const auto it = entries_.find(full);
    if (it == entries_.end())
      throw ConfigError("config: missing required key '" + full + "'");
    consumed_.insert(full);
    return it->second;
  }

  void check_all_consumed() const {
    // Report the earliest unconsumed entry by line for a stable diagnostic.
    const std::pair<const std::string, RawValue>* worst = nullptr;
    for (const auto& e : entries_) {
      if (consumed_.count(e.first)) continue;
      if (!worst || e.second.line < worst->second.line) worst = &e;
    }
    if (worst)
      throw ConfigError("config line " + std::to_string(worst->second.line) +
                        ": unknown key '" + worst->first + "'");
  }

 private:
  std::map<std::string, RawValue> entries_;
  std::set<std::string> consumed_;
};

[[noreturn]] void bad_value(const std::string& key, const RawValue& rv,
                            const std::string& expected) {
  throw ConfigError("config line " + std::to_string(rv.line) + ": key '" +
                    key + "': expected " + expected + ", got '" + rv.value +
                    "'");
}

double parse_double(const std::string& key, const RawValue& rv,
                    const std::string& text) {
  double out = 0.0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc{} || p != end) bad_value(key, rv, "a number");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const RawValue& rv,
                        const std::string& text) {
  std::uint64_t out = 0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc{} || p != end) bad_value(key, rv, "a non-negative integer");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

class ConfigReader {
 public:
  explicit ConfigReader(KeyStore& store) : store_(store) {}

  double number(const std::string& key) {
    const RawValue& rv = store_.require(key);
    return parse_double(key, rv, rv.value);
  }
  std::uint64_t integer(const std::string& key) {
    const RawValue& rv = store_.require(key);
    return parse_u64(key, rv, rv.value);
  }
  std::uint32_t integer32(const std::string& key) {
    const std::uint64_t v = integer(key);
    if (v > 0xFFFFFFFFull) {
      const RawValue& rv = store_.require(key);
      bad_value(key, rv, "a 32-bit integer");
    }
    return static_cast<std::uint32_t>(v);
  }
  std::vector<std::uint32_t> integer_list(const std::string& key) {
    const RawValue& rv = store_.require(key);
    std::vector<std::uint32_t> out;
    for (const std::string& item : split_list(rv.value))
      out.push_back(static_cast<std::uint32_t>(parse_u64(key, rv, item)));
    return out;
  }
  std::vector<double> number_list(const std::string& key) {
    const RawValue& rv = store_.require(key);
    std::vector<double> out;
    for (const std::string& item : split_list(rv.value))
      out.push_back(parse_double(key, rv, item));
    return out;
  }
  std::string token(const std::string& key) {
    return store_.require(key).value;
  }
  [[noreturn]] void reject(const std::string& key, const std::string& expected) {
    bad_value(key, store_.require(key), expected);
  }

 private:
  KeyStore& store_;
};

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
  KeyStore store;
  {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      // Strip comments (# or ; to end of line), then whitespace.
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("config line " + std::to_string(line_no) +
                            ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty())
          throw ConfigError("config line " + std::to_string(line_no) +
                            ": empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": key '" + key + "' outside any section");
      if (key.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": empty key");
      store.insert(section, key, value, line_no);
    }
  }

  ConfigReader r(store);
  ScenarioConfig cfg;

  cfg.topology.n_nodes_min = r.integer32("topology.n_nodes_min");
  cfg.topology.n_nodes_max = r.integer32("topology.n_nodes_max");
  cfg.topology.link_probability = r.number("topology.link_probability");
  cfg.topology.length_min_km = r.number("topology.length_min_km");
  cfg.topology.length_max_km = r.number("topology.length_max_km");
  cfg.topology.min_degree = r.integer32("topology.min_degree");
  cfg.topology.w_total = r.integer32("topology.w_total");
  cfg.topology.w_quantum = r.integer32("topology.w_quantum");

  cfg.channel.alpha_q_db_per_km = r.number("channel.alpha_q_db_per_km");
  cfg.channel.alpha_c_db_per_km = r.number("channel.alpha_c_db_per_km");
  cfg.channel.p_tx_quantum = r.number("channel.p_tx_quantum");
  cfg.channel.qsnr_threshold_db = r.number("channel.qsnr_threshold_db");
  cfg.channel.snr_target_db = r.number("channel.snr_target_db");
  cfg.channel.n_ref = r.number("channel.n_ref");
  {
    const std::string m = r.token("channel.length_metric");
    if (m == "actual") cfg.channel.length_metric = LengthMetric::Actual;
    else if (m == "effective") cfg.channel.length_metric = LengthMetric::Effective;
    else r.reject("channel.length_metric", "'actual' or 'effective'");
  }

  cfg.topology_count = r.integer32("experiment.topology_count");
  cfg.replications_per_topology =
      r.integer32("experiment.replications_per_topology");
  cfg.request_counts = r.integer_list("experiment.request_counts");
  cfg.classical_load = r.number("experiment.classical_load");
  cfg.seed = r.integer("experiment.seed");
  cfg.mixed_total_requests = r.integer32("experiment.mixed_total_requests");
  cfg.mixed_load_points = r.number_list("experiment.mixed_load_points");

  const std::uint32_t ksp_k = r.integer32("algorithms.ksp_k");
  const std::uint32_t max_hops = r.integer32("algorithms.max_hops");
  std::vector<Heuristic> heuristics;
  {
    const RawValue& rv = store.require("algorithms.heuristics");
    for (const std::string& h : split_list(rv.value)) {
      if (h == "kspff") heuristics.push_back(Heuristic::KspFf);
      else if (h == "mqdo") heuristics.push_back(Heuristic::Mqdo);
      else if (h == "mqcco") heuristics.push_back(Heuristic::Mqcco);
      else if (h == "qtd") heuristics.push_back(Heuristic::Qtd);
      else bad_value("algorithms.heuristics", rv,
                     "tokens from {kspff, mqdo, mqcco, qtd}");
    }
    if (heuristics.empty())
      bad_value("algorithms.heuristics", rv, "a non-empty heuristic list");
  }
  std::vector<bool> power_settings;
  {
    const std::string pc = r.token("algorithms.power_control");
    if (pc == "off") power_settings = {false};
    else if (pc == "on") power_settings = {true};
    else if (pc == "both") power_settings = {false, true};
    else r.reject("algorithms.power_control", "'on', 'off' or 'both'");
  }
  for (Heuristic h : heuristics) {
    for (bool pc : power_settings) {
      AlgorithmSpec spec;
      spec.heuristic = h;
      spec.power_control = pc;
      spec.ksp_k = ksp_k;
      spec.max_hops = max_hops;
      cfg.algorithm_specs.push_back(spec);
    }
  }

  store.check_all_consumed();
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

}  // namespace qrwa
