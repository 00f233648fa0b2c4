#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "qrwa/config.hpp"

using namespace qrwa;

namespace {

// a minimal but complete config; tests mutate single lines off this base
const char* kBase = R"(
[topology]
n_nodes_min = 5
n_nodes_max = 6
link_probability = 0.5
length_min_km = 10
length_max_km = 20
min_degree = 2
w_total = 8
w_quantum = 4

[channel]
alpha_q_db_per_km = 0.32
alpha_c_db_per_km = 0.17
p_tx_quantum = 1.0
qsnr_threshold_db = 15
snr_target_db = 20
n_ref = 1
length_metric = actual

[experiment]
topology_count = 1
replications_per_topology = 2
request_counts = 3,4
classical_load = 0.5
seed = 7
mixed_total_requests = 5
mixed_load_points = 0,1

[algorithms]
heuristics = kspff
power_control = off
ksp_k = 3
max_hops = 0
)";

std::string with(const std::string& from, const std::string& to) {
  std::string text = kBase;
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError");
  return {};
}

}  // namespace

TEST_CASE("the shipped default config parses to the documented experiment") {
  const ScenarioConfig cfg = parse_scenario_file(CONFIG_DIR "/default.ini");

  CHECK(cfg.topology.n_nodes_min == 5);
  CHECK(cfg.topology.n_nodes_max == 10);
  CHECK(cfg.topology.link_probability == 0.5);
  CHECK(cfg.topology.length_min_km == 10.0);
  CHECK(cfg.topology.length_max_km == 20.0);
  CHECK(cfg.topology.min_degree == 2);
  CHECK(cfg.topology.w_total == 80);
  CHECK(cfg.topology.w_quantum == 40);

  CHECK(cfg.channel.alpha_q_db_per_km == 0.32);
  CHECK(cfg.channel.alpha_c_db_per_km == 0.17);
  CHECK(cfg.channel.p_tx_quantum == 1.0);
  CHECK(cfg.channel.qsnr_threshold_db == 15.0);
  CHECK(cfg.channel.snr_target_db == 20.0);
  CHECK(cfg.channel.n_ref == 1.0);
  CHECK(cfg.channel.length_metric == LengthMetric::Effective);

  CHECK(cfg.topology_count == 10);
  CHECK(cfg.replications_per_topology == 500);
  CHECK(cfg.request_counts ==
        std::vector<std::uint32_t>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  CHECK(cfg.classical_load == 0.0);
  CHECK(cfg.seed == 1);
  CHECK(cfg.mixed_total_requests == 90);
  CHECK(cfg.mixed_load_points ==
        std::vector<double>{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
                            1.0});

  // heuristic-major, power-control-minor (off before on)
  REQUIRE(cfg.algorithm_specs.size() == 8);
  const Heuristic order[] = {Heuristic::KspFf, Heuristic::Mqdo,
                             Heuristic::Mqcco, Heuristic::Qtd};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(cfg.algorithm_specs[i].heuristic == order[i / 2]);
    CHECK(cfg.algorithm_specs[i].power_control == (i % 2 == 1));
    CHECK(cfg.algorithm_specs[i].ksp_k == 5);
    CHECK(cfg.algorithm_specs[i].max_hops == 0);
  }
}

TEST_CASE("base fixture parses and fills every field") {
  const ScenarioConfig cfg = parse_scenario_text(kBase);
  CHECK(cfg.topology.n_nodes_max == 6);
  CHECK(cfg.channel.length_metric == LengthMetric::Actual);
  CHECK(cfg.request_counts == std::vector<std::uint32_t>{3, 4});
  CHECK(cfg.classical_load == 0.5);
  CHECK(cfg.seed == 7);
  REQUIRE(cfg.algorithm_specs.size() == 1);
  CHECK(cfg.algorithm_specs[0].heuristic == Heuristic::KspFf);
  CHECK(cfg.algorithm_specs[0].power_control == false);
  CHECK(cfg.algorithm_specs[0].ksp_k == 3);
}

TEST_CASE("comments, blank lines and both comment markers are ignored") {
  const std::string text =
      with("seed = 7", "seed = 7   # trailing comment\n; full-line comment\n");
  CHECK(parse_scenario_text(text).seed == 7);
}

TEST_CASE("power_control expands in the documented order") {
  {
    const ScenarioConfig cfg =
        parse_scenario_text(with("power_control = off", "power_control = both"));
    REQUIRE(cfg.algorithm_specs.size() == 2);
    CHECK(cfg.algorithm_specs[0].power_control == false);
    CHECK(cfg.algorithm_specs[1].power_control == true);
  }
  {
    const ScenarioConfig cfg =
        parse_scenario_text(with("power_control = off", "power_control = on"));
    REQUIRE(cfg.algorithm_specs.size() == 1);
    CHECK(cfg.algorithm_specs[0].power_control == true);
  }
  {
    const ScenarioConfig cfg = parse_scenario_text(
        with("heuristics = kspff", "heuristics = qtd,mqdo"));
    REQUIRE(cfg.algorithm_specs.size() == 2);
    CHECK(cfg.algorithm_specs[0].heuristic == Heuristic::Qtd);  // listed order
    CHECK(cfg.algorithm_specs[1].heuristic == Heuristic::Mqdo);
  }
}

TEST_CASE("duplicate keys are rejected with the line number") {
  const std::string text = with("seed = 7", "seed = 7\nseed = 8");
  CHECK(error_of(text) == "config line 27: duplicate key 'experiment.seed'");
}

TEST_CASE("missing keys are reported by their full name") {
  const std::string text = with("seed = 7\n", "");
  CHECK(error_of(text) == "config: missing required key 'experiment.seed'");
}

TEST_CASE("unknown keys are rejected, earliest first") {
  const std::string text =
      with("[channel]", "mystery = 1\n\n[channel]\nanother = 2");
  CHECK(error_of(text) == "config line 12: unknown key 'topology.mystery'");
}

TEST_CASE("malformed values name the key, the expectation and the text") {
  CHECK(error_of(with("link_probability = 0.5", "link_probability = abc")) ==
        "config line 5: key 'topology.link_probability': expected a number, "
        "got 'abc'");
  CHECK(error_of(with("seed = 7", "seed = -1")) ==
        "config line 26: key 'experiment.seed': expected a non-negative "
        "integer, got '-1'");
  CHECK(error_of(with("length_metric = actual", "length_metric = middle")) ==
        "config line 19: key 'channel.length_metric': expected 'actual' or "
        "'effective', got 'middle'");
  CHECK(error_of(with("power_control = off", "power_control = maybe")) ==
        "config line 32: key 'algorithms.power_control': expected 'on', 'off' "
        "or 'both', got 'maybe'");
  CHECK(error_of(with("heuristics = kspff", "heuristics = kspff,magic")) ==
        "config line 31: key 'algorithms.heuristics': expected tokens from "
        "{kspff, mqdo, mqcco, qtd}, got 'kspff,magic'");
  CHECK(error_of(with("w_total = 8", "w_total = 5000000000")) ==
        "config line 9: key 'topology.w_total': expected a 32-bit integer, "
        "got '5000000000'");
}

TEST_CASE("structural line errors carry line numbers") {
  CHECK(error_of(with("[topology]", "[topology")) ==
        "config line 2: malformed section header");
  CHECK(error_of(with("[topology]", "[]")) ==
        "config line 2: empty section name");
  CHECK(error_of(with("[topology]\n", "stray = 1\n[topology]\n")) ==
        "config line 2: key 'stray' outside any section");
  CHECK(error_of(with("n_nodes_min = 5", "n_nodes_min")) ==
        "config line 3: expected 'key = value'");
  CHECK(error_of(with("n_nodes_min = 5", "= 5")) ==
        "config line 3: empty key");
}

TEST_CASE("semantic validation still applies after parsing") {
  // parses fine, then the scenario validator rejects it
  CHECK_THROWS_AS(
      parse_scenario_text(with("classical_load = 0.5", "classical_load = 2")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_scenario_text(with("w_quantum = 4", "w_quantum = 9")),
      std::invalid_argument);
}

TEST_CASE("missing files are reported with their path") {
  try {
    parse_scenario_file("/nonexistent/nowhere.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) ==
          "cannot open config file: /nonexistent/nowhere.ini");
  }
}
