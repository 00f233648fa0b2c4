#include "qrwa/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "qrwa/rng.hpp"

namespace qrwa {

void ScenarioConfig::validate() const {
  topology.validate();
  channel.validate();
  if (topology_count == 0)
    throw std::invalid_argument("scenario: topology_count must be >= 1");
  if (replications_per_topology == 0)
    throw std::invalid_argument(
        "scenario: replications_per_topology must be >= 1");
  if (request_counts.empty())
    throw std::invalid_argument("scenario: request_counts must be non-empty");
  for (std::uint32_t n : request_counts) {
    if (n == 0)
      throw std::invalid_argument("scenario: request_counts must be positive");
  }
  if (!(classical_load >= 0.0 && classical_load <= 1.0))
    throw std::invalid_argument("scenario: classical_load must be in [0, 1]");
  if (algorithm_specs.empty())
    throw std::invalid_argument("scenario: algorithm_specs must be non-empty");
  for (const AlgorithmSpec& s : algorithm_specs) s.validate();
  if (mixed_total_requests == 0)
    throw std::invalid_argument("scenario: mixed_total_requests must be >= 1");
  for (double l : mixed_load_points) {
    if (!(l >= 0.0 && l <= 1.0))
      throw std::invalid_argument(
          "scenario: mixed_load_points must be in [0, 1]");
  }
}

std::vector<Request> generate_requests(const NetworkGraph& graph,
                                       std::uint32_t n, double classical_load,
                                       std::uint64_t seed) {
  if (graph.n_nodes() < 2)
    throw std::invalid_argument("generate_requests: need at least 2 nodes");
  if (!(classical_load >= 0.0 && classical_load <= 1.0))
    throw std::invalid_argument("generate_requests: load must be in [0, 1]");
  SplitMix64 rng(seed);
  const auto n_classical = std::min<std::uint32_t>(
      n, static_cast<std::uint32_t>(
             std::floor(static_cast<double>(n) * classical_load + 0.5)));
  std::vector<RequestKind> kinds(n, RequestKind::Quantum);
  std::fill(kinds.end() - n_classical, kinds.end(), RequestKind::ClassicalPure);
  shuffle(kinds, rng);
  std::vector<Request> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId s = static_cast<NodeId>(rng.next_below(graph.n_nodes()));
    NodeId d = static_cast<NodeId>(rng.next_below(graph.n_nodes() - 1));
    if (d >= s) ++d;
    out.push_back(Request{i, s, d, kinds[i]});
  }
  return out;
}

ReplicationResult run_replication(
    const NetworkGraph& graph, std::span<const Request> requests,
    const AlgorithmSpec& spec, const ChannelParams& params,
    std::shared_ptr<const CandidateCache> warm_cache) {
  NetworkState state(graph, params, std::move(warm_cache));
  ReplicationResult result;
  result.total = static_cast<std::uint32_t>(requests.size());
  for (const Request& r : requests) {
    if (!state.serve_request(r, spec).established()) ++result.blocked;
  }
  result.quantum_qsnr_db_values = state.established_quantum_qsnr_db();
  return result;
}

std::pair<double, double> confidence_interval_95(
    std::span<const double> samples) {
  if (samples.empty())
    throw std::invalid_argument("confidence_interval_95: empty sample list");
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  if (samples.size() == 1) return {mean, 0.0};
  double ssq = 0.0;
  for (double x : samples) ssq += (x - mean) * (x - mean);
  const double sd = std::sqrt(ssq / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

namespace {

struct GridCell {
  std::uint32_t request_count;
  double classical_load;
};

// Shared campaign driver: topologies sequentially, replications inside one
// topology split across workers.  Workers write into preassigned slots, so
// the assembled result is a pure function of the config.
SweepResult run_campaign(const ScenarioConfig& config,
                         const std::vector<GridCell>& cells, unsigned threads) {
  config.validate();
  const ChannelParams params = make_channel_params(config.channel);
  if (threads == 0) threads = 1;

  const std::uint32_t n_topologies = config.topology_count;
  const std::uint32_t n_reps = config.replications_per_topology;
  const std::size_t n_specs = config.algorithm_specs.size();
  const std::size_t slots_per_rep = cells.size() * n_specs;

  SweepResult result;
  result.specs = config.algorithm_specs;
  result.length_metric = config.channel.length_metric;
  result.raw.reserve(static_cast<std::size_t>(n_topologies) * n_reps *
                     slots_per_rep);

  std::vector<ReplicationResult> slots(static_cast<std::size_t>(n_reps) *
                                       slots_per_rep);
  for (std::uint32_t t = 0; t < n_topologies; ++t) {
    const NetworkGraph graph = generate_random_topology(
        config.topology, derive_seed({config.seed, kSeedTagTopology, t}));
    auto cache = std::make_shared<CandidateCache>();
    {
      std::set<std::uint32_t> hop_bounds{graph.n_nodes() - 1};
      for (const AlgorithmSpec& s : config.algorithm_specs) {
        hop_bounds.insert(s.max_hops == 0
                              ? graph.n_nodes() - 1
                              : std::min(s.max_hops, graph.n_nodes() - 1));
      }
      for (std::uint32_t h : hop_bounds) cache->warm(graph, h);
    }
    std::shared_ptr<const CandidateCache> shared_cache = cache;

    std::atomic<std::uint32_t> next_rep{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
      try {
        for (;;) {
          const std::uint32_t r = next_rep.fetch_add(1);
          if (r >= n_reps) break;
          {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error) break;
          }
          for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            const std::vector<Request> requests = generate_requests(
                graph, cells[ci].request_count, cells[ci].classical_load,
                derive_seed({config.seed, kSeedTagRequests, t, r, ci}));
            for (std::size_t si = 0; si < n_specs; ++si) {
              slots[(static_cast<std::size_t>(r) * cells.size() + ci) *
                        n_specs +
                    si] =
                  run_replication(graph, requests, config.algorithm_specs[si],
                                  params, shared_cache);
            }
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      const unsigned n_workers = std::min<unsigned>(threads, n_reps);
      pool.reserve(n_workers);
      for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::uint32_t r = 0; r < n_reps; ++r) {
      for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        for (std::size_t si = 0; si < n_specs; ++si) {
          const ReplicationResult& rep =
              slots[(static_cast<std::size_t>(r) * cells.size() + ci) *
                        n_specs +
                    si];
          RawRecord rec;
          rec.spec_index = static_cast<std::uint32_t>(si);
          rec.topology = t;
          rec.replication = r;
          rec.request_count = cells[ci].request_count;
          rec.classical_load = cells[ci].classical_load;
          rec.blocked = rep.blocked;
          rec.total = rep.total;
          rec.qsnr_count =
              static_cast<std::uint32_t>(rep.quantum_qsnr_db_values.size());
          for (double v : rep.quantum_qsnr_db_values) {
            rec.qsnr_sum += v;
            rec.qsnr_sumsq += v * v;
          }
          result.raw.push_back(rec);
        }
      }
    }
  }

  // Aggregate per (spec, cell) in fixed raw order.
  for (std::size_t si = 0; si < n_specs; ++si) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      std::vector<double> blocking;
      blocking.reserve(static_cast<std::size_t>(n_topologies) * n_reps);
      std::uint64_t qsnr_n = 0;
      double qsnr_sum = 0.0, qsnr_sumsq = 0.0;
      for (const RawRecord& rec : result.raw) {
        if (rec.spec_index != si ||
            rec.request_count != cells[ci].request_count ||
            rec.classical_load != cells[ci].classical_load)
          continue;
        blocking.push_back(static_cast<double>(rec.blocked) /
                           static_cast<double>(rec.total));
        qsnr_n += rec.qsnr_count;
        qsnr_sum += rec.qsnr_sum;
        qsnr_sumsq += rec.qsnr_sumsq;
      }
      AggregateRow row;
      row.spec_index = static_cast<std::uint32_t>(si);
      row.spec = config.algorithm_specs[si];
      row.request_count = cells[ci].request_count;
      row.classical_load = cells[ci].classical_load;
      const auto [bm, bc] = confidence_interval_95(blocking);
      row.blocking_ratio_mean = bm;
      row.blocking_ratio_ci95 = bc;
      if (qsnr_n > 0) {
        const double mean = qsnr_sum / static_cast<double>(qsnr_n);
        row.qsnr_db_mean = mean;
        if (qsnr_n > 1) {
          const double var =
              std::max(0.0, (qsnr_sumsq -
                             qsnr_sum * qsnr_sum / static_cast<double>(qsnr_n)) /
                                static_cast<double>(qsnr_n - 1));
          row.qsnr_db_ci95 =
              1.96 * std::sqrt(var / static_cast<double>(qsnr_n));
        }
      }
      row.n_samples = blocking.size();
      result.aggregates.push_back(row);
    }
  }
  std::stable_sort(result.aggregates.begin(), result.aggregates.end(),
                   [](const AggregateRow& a, const AggregateRow& b) {
                     if (a.spec.heuristic != b.spec.heuristic)
                       return a.spec.heuristic < b.spec.heuristic;
                     if (a.spec.power_control != b.spec.power_control)
                       return a.spec.power_control < b.spec.power_control;
                     if (a.request_count != b.request_count)
                       return a.request_count < b.request_count;
                     return a.classical_load < b.classical_load;
                   });
  return result;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& config, unsigned threads) {
  std::vector<GridCell> cells;
  cells.reserve(config.request_counts.size());
  for (std::uint32_t rc : config.request_counts)
    cells.push_back(GridCell{rc, config.classical_load});
  return run_campaign(config, cells, threads);
}

SweepResult run_mixed_sweep(const ScenarioConfig& config,
                            std::uint32_t total_requests,
                            std::span<const double> load_points,
                            unsigned threads) {
  if (load_points.empty())
    throw std::invalid_argument("mixed sweep: load_points must be non-empty");
  std::vector<GridCell> cells;
  cells.reserve(load_points.size());
  for (double l : load_points) cells.push_back(GridCell{total_requests, l});
  return run_campaign(config, cells, threads);
}

SweepResult run_mixed_sweep(const ScenarioConfig& config, unsigned threads) {
  return run_mixed_sweep(config, config.mixed_total_requests,
                         config.mixed_load_points, threads);
}

}  // namespace qrwa
