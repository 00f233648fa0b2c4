#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qrwa/channel_model.hpp"
#include "qrwa/rwa.hpp"
#include "qrwa/topology.hpp"

namespace qrwa {

// One full experiment description: everything the sweeps need, and the
// single master seed every random stream is derived from.
struct ScenarioConfig {
  TopologyConfig topology;
  ChannelInputs channel;
  std::uint32_t topology_count = 10;
  std::uint32_t replications_per_topology = 500;
  std::vector<std::uint32_t> request_counts;  // sweep x-axis
  double classical_load = 0.0;                // sweep: fixed load fraction
  std::vector<AlgorithmSpec> algorithm_specs;
  std::uint64_t seed = 1;
  // mixed-traffic sweep: fixed request count, varying load
  std::uint32_t mixed_total_requests = 90;
  std::vector<double> mixed_load_points;

  void validate() const;  // throws std::invalid_argument
};

struct ReplicationResult {
  std::uint32_t blocked = 0;
  std::uint32_t total = 0;
  std::vector<double> quantum_qsnr_db_values;
};

// Per-replication record; QSNR kept as moments so pooled aggregates can be
// formed without retaining every sample.
struct RawRecord {
  std::uint32_t spec_index = 0;
  std::uint32_t topology = 0;
  std::uint32_t replication = 0;
  std::uint32_t request_count = 0;
  double classical_load = 0.0;
  std::uint32_t blocked = 0;
  std::uint32_t total = 0;
  std::uint32_t qsnr_count = 0;
  double qsnr_sum = 0.0;
  double qsnr_sumsq = 0.0;
};

struct AggregateRow {
  std::uint32_t spec_index = 0;
  AlgorithmSpec spec;
  std::uint32_t request_count = 0;
  double classical_load = 0.0;
  double blocking_ratio_mean = 0.0;
  double blocking_ratio_ci95 = 0.0;
  std::optional<double> qsnr_db_mean;  // absent when no quantum established
  double qsnr_db_ci95 = 0.0;
  std::uint64_t n_samples = 0;  // replication count behind the row
};

struct SweepResult {
  std::vector<AlgorithmSpec> specs;
  LengthMetric length_metric = LengthMetric::Actual;
  // Sorted by (heuristic, power_control, request_count, classical_load).
  std::vector<AggregateRow> aggregates;
  // Nested order: topology, replication, grid cell, spec.
  std::vector<RawRecord> raw;
};

// round(n * classical_load) ClassicalPure requests (round half up), the rest
// Quantum, randomly interleaved; endpoints uniform over ordered distinct
// node pairs.  Pure function of (graph size, n, load, seed).
std::vector<Request> generate_requests(const NetworkGraph& graph,
                                       std::uint32_t n, double classical_load,
                                       std::uint64_t seed);

// Serves the request list in order on a fresh state over `graph`.
ReplicationResult run_replication(
    const NetworkGraph& graph, std::span<const Request> requests,
    const AlgorithmSpec& spec, const ChannelParams& params,
    std::shared_ptr<const CandidateCache> warm_cache = nullptr);

// The load sweep: request_counts x fixed classical_load.  `threads` workers
// split replications; output is bit-identical for any thread count.
SweepResult run_sweep(const ScenarioConfig& config, unsigned threads = 1);

// The mixed-traffic sweep: fixed total request count, varying load points.
SweepResult run_mixed_sweep(const ScenarioConfig& config,
                            std::uint32_t total_requests,
                            std::span<const double> load_points,
                            unsigned threads = 1);
// Convenience overload using config.mixed_total_requests/mixed_load_points.
SweepResult run_mixed_sweep(const ScenarioConfig& config, unsigned threads = 1);

// (mean, 1.96 * sample sd / sqrt(n)); halfwidth 0 for n = 1; throws
// std::invalid_argument on an empty list.
std::pair<double, double> confidence_interval_95(std::span<const double> samples);

}  // namespace qrwa
