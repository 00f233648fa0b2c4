// Cross-checks the production engine against the independent reference
// simulator in mini_sim.hpp: same admission decisions, same paths,
// wavelengths and launch powers, and bit-identical QSNR values over a
// randomized mixed workload.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "mini_sim.hpp"
#include "oracles.hpp"
#include "qrwa/rng.hpp"

using namespace qrwa;
using namespace qrwa::testing;

namespace {

struct ParityStats {
  int served = 0;
  int blocked = 0;
  int quantum = 0;
};

ParityStats run_parity(Heuristic h, bool power_control, LengthMetric metric,
                       std::uint64_t seed, std::uint32_t n_requests) {
  ChannelInputs in;
  in.length_metric = metric;
  const ChannelParams params = make_channel_params(in);
  AlgorithmSpec spec;
  spec.heuristic = h;
  spec.power_control = power_control;

  TopologyConfig tc;
  const NetworkGraph g =
      generate_random_topology(tc, derive_seed({seed, kSeedTagTopology, 0}));
  NetworkState st(g, params);
  MiniSim mini(g, params, spec);

  ParityStats stats;
  SplitMix64 rng(derive_seed({seed, kSeedTagRequests, 0, 0, 0}));
  for (std::uint32_t i = 0; i < n_requests; ++i) {
    Request r;
    r.id = i;
    r.kind = rng.next_double() < 0.5 ? RequestKind::Quantum
                                     : RequestKind::ClassicalPure;
    r.source = static_cast<NodeId>(rng.next_below(g.n_nodes()));
    NodeId d = static_cast<NodeId>(rng.next_below(g.n_nodes() - 1));
    if (d >= r.source) ++d;
    r.dest = d;

    const auto outcome = st.serve_request(r, spec);
    const bool mini_ok = mini.serve(r);
    // decision parity on every single request
    REQUIRE(outcome.established() == mini_ok);
    if (mini_ok) {
      ++stats.served;
      if (r.kind == RequestKind::Quantum) ++stats.quantum;
    } else {
      ++stats.blocked;
    }
  }

  // Lightpath-level parity: identical routes, wavelengths and powers.
  const auto est = st.established();
  REQUIRE(est.size() == mini.lightpaths().size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& ml = mini.lightpaths()[i];
    CHECK(same_path(ml.path, est[i]->path));
    CHECK(ml.wavelength == est[i]->wavelength);
    CHECK(ml.launch_power == est[i]->launch_power);  // bit-exact
  }

  // QSNR parity must be bit-exact, not approximate: both sides fold the
  // interference sum in the same order over the same doubles.
  const std::vector<double> mini_q = mini.quantum_qsnr_db();
  std::vector<double> prod_q;
  for (const Lightpath* lp : est)
    if (lp->kind == ChannelKind::Quantum) prod_q.push_back(*lp->qsnr_db);
  REQUIRE(mini_q.size() == prod_q.size());
  for (std::size_t i = 0; i < mini_q.size(); ++i) CHECK(mini_q[i] == prod_q[i]);

  return stats;
}

void check_heuristic(Heuristic h) {
  int served = 0;
  int blocked = 0;
  for (LengthMetric m : {LengthMetric::Actual, LengthMetric::Effective}) {
    for (int pc = 0; pc < 2; ++pc) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const ParityStats s = run_parity(h, pc != 0, m, seed, 60);
        served += s.served;
        blocked += s.blocked;
      }
    }
  }
  // the workload must actually exercise both outcomes
  CHECK(served > 0);
  CHECK(blocked > 0);
}

}  // namespace

TEST_CASE("parity: shortest-path first-fit") { check_heuristic(Heuristic::KspFf); }

TEST_CASE("parity: minimum quantum overlap") { check_heuristic(Heuristic::Mqdo); }

TEST_CASE("parity: weighted quantum overlap") { check_heuristic(Heuristic::Mqcco); }

TEST_CASE("parity: disjoint routing") { check_heuristic(Heuristic::Qtd); }
