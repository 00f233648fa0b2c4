#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qrwa/results.hpp"
#include "qrwa/rng.hpp"
#include "qrwa/simulation.hpp"

using namespace qrwa;
using namespace qrwa::testing;

namespace {

bool same_request(const Request& a, const Request& b) {
  return a.id == b.id && a.source == b.source && a.dest == b.dest &&
         a.kind == b.kind;
}

ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.topology_count = 2;
  cfg.replications_per_topology = 3;
  cfg.request_counts = {5, 8};
  cfg.classical_load = 0.3;
  cfg.seed = 9;
  AlgorithmSpec a;
  a.heuristic = Heuristic::KspFf;
  a.power_control = false;
  AlgorithmSpec b;
  b.heuristic = Heuristic::Qtd;
  b.power_control = true;
  cfg.algorithm_specs = {a, b};
  return cfg;
}

}  // namespace

TEST_CASE("request generation: classical share rounds half up") {
  const NetworkGraph g = triangle_graph(20.0, 25.0, 50.0);
  auto n_classical = [&](std::uint32_t n, double load) {
    std::uint32_t c = 0;
    for (const Request& r : generate_requests(g, n, load, 1))
      c += r.kind == RequestKind::ClassicalPure;
    return c;
  };
  CHECK(n_classical(90, 0.0) == 0);
  CHECK(n_classical(90, 1.0) == 90);
  CHECK(n_classical(90, 0.5) == 45);
  CHECK(n_classical(3, 0.5) == 2);    // 1.5 rounds up
  CHECK(n_classical(10, 0.55) == 6);  // 5.5 rounds up
  CHECK(n_classical(90, 1.0 / 3.0) == 30);
  CHECK(n_classical(1, 0.49) == 0);
  CHECK(n_classical(1, 0.5) == 1);
}

TEST_CASE("request generation: ids, endpoints and determinism") {
  TopologyConfig tc;
  const NetworkGraph g = generate_random_topology(tc, 11);
  const auto reqs = generate_requests(g, 60, 0.4, 123);
  REQUIRE(reqs.size() == 60);
  for (std::uint32_t i = 0; i < reqs.size(); ++i) {
    CHECK(reqs[i].id == i);
    CHECK(reqs[i].source < g.n_nodes());
    CHECK(reqs[i].dest < g.n_nodes());
    CHECK(reqs[i].source != reqs[i].dest);
  }
  const auto again = generate_requests(g, 60, 0.4, 123);
  REQUIRE(again.size() == reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i)
    CHECK(same_request(reqs[i], again[i]));

  const auto other = generate_requests(g, 60, 0.4, 124);
  bool any_diff = false;
  for (std::size_t i = 0; i < reqs.size(); ++i)
    any_diff |= !same_request(reqs[i], other[i]);
  CHECK(any_diff);
}

TEST_CASE("request generation follows the documented drawing order") {
  // pin the exact recipe: kind layout shuffled first, then one (source,
  // dest-skip) draw pair per request, all from one stream
  const NetworkGraph g = triangle_graph(20.0, 25.0, 50.0);
  const std::uint64_t seed = 77;
  const std::uint32_t n = 12;
  const double load = 0.5;

  SplitMix64 rng(seed);
  std::vector<RequestKind> kinds(n, RequestKind::Quantum);
  std::fill(kinds.end() - 6, kinds.end(), RequestKind::ClassicalPure);
  shuffle(kinds, rng);
  std::vector<Request> want;
  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId s = static_cast<NodeId>(rng.next_below(g.n_nodes()));
    NodeId d = static_cast<NodeId>(rng.next_below(g.n_nodes() - 1));
    if (d >= s) ++d;
    want.push_back(Request{i, s, d, kinds[i]});
  }

  const auto got = generate_requests(g, n, load, seed);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(same_request(got[i], want[i]));
}

TEST_CASE("request generation argument validation") {
  const NetworkGraph g = triangle_graph(20.0, 25.0, 50.0);
  CHECK_THROWS_AS(generate_requests(g, 5, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_requests(g, 5, 1.1, 1), std::invalid_argument);
  NetworkGraph lone(1, 8, 4);
  lone.finalize();
  CHECK_THROWS_AS(generate_requests(lone, 5, 0.5, 1), std::invalid_argument);
}

TEST_CASE("run_replication counts blocking and collects qsnr") {
  const ChannelParams params = make_channel_params(ChannelInputs{});
  AlgorithmSpec spec;
  spec.power_control = true;

  const NetworkGraph tri = triangle_graph(20.0, 25.0, 50.0);
  const std::vector<Request> one{Request{0, 0, 1, RequestKind::Quantum}};
  const auto ok = run_replication(tri, one, spec, params);
  CHECK(ok.total == 1);
  CHECK(ok.blocked == 0);
  REQUIRE(ok.quantum_qsnr_db_values.size() == 1);

  // 45 km chain: the forward control channel cannot protect the quantum
  const NetworkGraph chain = chain_graph({20.0, 25.0});
  const std::vector<Request> fail{Request{0, 0, 2, RequestKind::Quantum}};
  const auto bad = run_replication(chain, fail, spec, params);
  CHECK(bad.total == 1);
  CHECK(bad.blocked == 1);
  CHECK(bad.quantum_qsnr_db_values.empty());

  const auto empty = run_replication(tri, {}, spec, params);
  CHECK(empty.total == 0);
  CHECK(empty.blocked == 0);
}

TEST_CASE("confidence interval: frozen values and edge cases") {
  CHECK_THROWS_AS(confidence_interval_95({}), std::invalid_argument);

  const double single[] = {3.5};
  CHECK(confidence_interval_95(single) == std::pair{3.5, 0.0});

  const double coin[] = {0.0, 1.0};
  const auto [m2, c2] = confidence_interval_95(coin);
  CHECK(m2 == 0.5);
  CHECK(c2 == 0.9799999999999999);  // (1.96 * sd(0,1)) / sqrt(2), this order

  const double flat[] = {2.0, 2.0, 2.0, 2.0};
  const auto [m3, c3] = confidence_interval_95(flat);
  CHECK(m3 == 2.0);
  CHECK(c3 == 0.0);

  const double five[] = {1.0, 2.0, 3.0, 4.0, 5.0};
  const auto [m4, c4] = confidence_interval_95(five);
  CHECK(m4 == 3.0);
  // 1.96 * sqrt(2.5)/sqrt(5) == 1.96 * sqrt(0.5)
  CHECK(c4 == doctest::Approx(1.3859292911256332).epsilon(1e-14));
}

TEST_CASE("scenario validation rejects each malformed field") {
  ScenarioConfig cfg = small_scenario();
  cfg.validate();
  ScenarioConfig b = cfg;
  b.topology_count = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.replications_per_topology = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.request_counts.clear();
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.request_counts = {5, 0};
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.classical_load = 1.5;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.algorithm_specs.clear();
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.mixed_total_requests = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = cfg;
  b.mixed_load_points = {0.5, -0.1};
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("sweep: layout, pairing, and exact cell reproduction") {
  const ScenarioConfig cfg = small_scenario();
  const SweepResult res = run_sweep(cfg, 1);

  // raw: topology-major, then replication, grid cell, spec
  REQUIRE(res.raw.size() == 2u * 3u * 2u * 2u);
  std::size_t i = 0;
  for (std::uint32_t t = 0; t < 2; ++t) {
    for (std::uint32_t r = 0; r < 3; ++r) {
      for (std::uint32_t ci = 0; ci < 2; ++ci) {
        for (std::uint32_t si = 0; si < 2; ++si, ++i) {
          const RawRecord& rec = res.raw[i];
          CHECK(rec.topology == t);
          CHECK(rec.replication == r);
          CHECK(rec.request_count == cfg.request_counts[ci]);
          CHECK(rec.classical_load == cfg.classical_load);
          CHECK(rec.spec_index == si);
          // paired design: both specs see the same request list
          CHECK(rec.total == cfg.request_counts[ci]);
        }
      }
    }
  }

  // one grid cell reproduced from scratch off the documented seeding scheme
  const std::uint32_t t = 1, r = 2, ci = 1, si = 1;
  const NetworkGraph graph = generate_random_topology(
      cfg.topology, derive_seed({cfg.seed, kSeedTagTopology, t}));
  const auto requests =
      generate_requests(graph, cfg.request_counts[ci], cfg.classical_load,
                        derive_seed({cfg.seed, kSeedTagRequests, t, r, ci}));
  const auto rep = run_replication(graph, requests, cfg.algorithm_specs[si],
                                   make_channel_params(cfg.channel));
  const RawRecord& rec = res.raw[((t * 3 + r) * 2 + ci) * 2 + si];
  CHECK(rec.blocked == rep.blocked);
  CHECK(rec.total == rep.total);
  CHECK(rec.qsnr_count == rep.quantum_qsnr_db_values.size());
  double sum = 0.0, sumsq = 0.0;
  for (double v : rep.quantum_qsnr_db_values) {
    sum += v;
    sumsq += v * v;
  }
  CHECK(rec.qsnr_sum == sum);
  CHECK(rec.qsnr_sumsq == sumsq);

  // aggregates: one row per (spec, cell), sorted, means matching the raws
  REQUIRE(res.aggregates.size() == 4);
  for (std::size_t k = 1; k < res.aggregates.size(); ++k) {
    const AggregateRow& a = res.aggregates[k - 1];
    const AggregateRow& b = res.aggregates[k];
    const auto key = [](const AggregateRow& x) {
      return std::tuple{x.spec.heuristic, x.spec.power_control,
                        x.request_count, x.classical_load};
    };
    CHECK(key(a) < key(b));
  }
  for (const AggregateRow& row : res.aggregates) {
    CHECK(row.n_samples == 6);  // 2 topologies x 3 replications
    std::vector<double> blocking;
    for (const RawRecord& rec2 : res.raw) {
      if (rec2.spec_index == row.spec_index &&
          rec2.request_count == row.request_count)
        blocking.push_back(static_cast<double>(rec2.blocked) /
                           static_cast<double>(rec2.total));
    }
    const auto [bm, bc] = confidence_interval_95(blocking);
    CHECK(row.blocking_ratio_mean == bm);
    CHECK(row.blocking_ratio_ci95 == bc);
  }
}

TEST_CASE("sweep output is bit-identical for any worker count") {
  const ScenarioConfig cfg = small_scenario();
  const SweepResult a = run_sweep(cfg, 1);
  const SweepResult b = run_sweep(cfg, 4);
  const SweepResult c = run_sweep(cfg, 3);
  CHECK(aggregate_csv(a) == aggregate_csv(b));
  CHECK(raw_csv(a) == raw_csv(b));
  CHECK(aggregate_csv(a) == aggregate_csv(c));
  CHECK(raw_csv(a) == raw_csv(c));
  // moments and CIs, not just their 6-digit renderings
  REQUIRE(a.raw.size() == b.raw.size());
  for (std::size_t i = 0; i < a.raw.size(); ++i) {
    CHECK(a.raw[i].blocked == b.raw[i].blocked);
    CHECK(a.raw[i].qsnr_sum == b.raw[i].qsnr_sum);
    CHECK(a.raw[i].qsnr_sumsq == b.raw[i].qsnr_sumsq);
  }
  REQUIRE(a.aggregates.size() == b.aggregates.size());
  for (std::size_t i = 0; i < a.aggregates.size(); ++i) {
    CHECK(a.aggregates[i].blocking_ratio_mean ==
          b.aggregates[i].blocking_ratio_mean);
    CHECK(a.aggregates[i].blocking_ratio_ci95 ==
          b.aggregates[i].blocking_ratio_ci95);
  }
}

TEST_CASE("mixed sweep varies load at a fixed request count") {
  ScenarioConfig cfg = small_scenario();
  cfg.request_counts = {1};  // unused by the mixed grid but must validate
  cfg.algorithm_specs.resize(1);
  const double loads[] = {0.0, 0.5, 1.0};
  const SweepResult res = run_mixed_sweep(cfg, 12, loads, 2);

  REQUIRE(res.raw.size() == 2u * 3u * 3u);
  for (const RawRecord& rec : res.raw) CHECK(rec.request_count == 12);

  REQUIRE(res.aggregates.size() == 3);
  CHECK(res.aggregates[0].classical_load == 0.0);
  CHECK(res.aggregates[1].classical_load == 0.5);
  CHECK(res.aggregates[2].classical_load == 1.0);
  // all-classical traffic establishes no quantum channels at all
  CHECK_FALSE(res.aggregates[2].qsnr_db_mean.has_value());
  CHECK(res.aggregates[2].qsnr_db_ci95 == 0.0);
  // all-quantum traffic does (at least somewhere in 18 replications)
  CHECK(res.aggregates[0].qsnr_db_mean.has_value());

  CHECK_THROWS_AS(run_mixed_sweep(cfg, 12, {}, 1), std::invalid_argument);

  // the convenience overload reads the config fields
  cfg.mixed_total_requests = 12;
  cfg.mixed_load_points = {0.0, 0.5, 1.0};
  const SweepResult again = run_mixed_sweep(cfg, 1);
  CHECK(aggregate_csv(again) == aggregate_csv(res));
  CHECK(raw_csv(again) == raw_csv(res));
}
