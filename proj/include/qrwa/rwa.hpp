#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "qrwa/channel_model.hpp"
#include "qrwa/routing.hpp"
#include "qrwa/topology.hpp"

namespace qrwa {

enum class RequestKind { Quantum, ClassicalPure };

// A quantum request needs four lightpaths: the quantum channel itself plus
// two classical control channels (one per direction) and a classical data
// channel.  A pure-classical request needs one classical lightpath.
enum class ChannelKind {
  Quantum,
  ClassicalControlForward,
  ClassicalControlReverse,
  ClassicalData,
  ClassicalPure,
};

enum class Heuristic { KspFf, Mqdo, Mqcco, Qtd };

enum class BlockReason {
  NoPathOrWavelength,
  QsnrBelowThreshold,
  DegradesEstablishedQuantum,
  NoDisjointPath,
};

struct AlgorithmSpec {
  Heuristic heuristic = Heuristic::KspFf;
  bool power_control = false;
  std::uint32_t ksp_k = 5;
  std::uint32_t max_hops = 0;  // 0: use n_nodes - 1 (no effective bound)

  void validate() const;  // throws std::invalid_argument
};

struct Request {
  std::uint32_t id = 0;
  NodeId source = 0;
  NodeId dest = 0;
  RequestKind kind = RequestKind::Quantum;
};

// An established lightpath plus the interference bookkeeping that lets the
// state update QSNR values incrementally (see rwa.cpp for the scheme).
struct Lightpath {
  std::uint32_t id = 0;
  std::uint32_t request_id = 0;
  ChannelKind kind = ChannelKind::Quantum;
  Path path;
  std::uint32_t wavelength = 0;
  double launch_power = 0.0;
  std::optional<double> qsnr_db;  // present iff kind == Quantum; kept current

  // quantum only: attenuated signal power (the QSNR numerator) and the
  // pre-gamma noise terms taken from interfering classical lightpaths,
  // keyed by their id, folded left to right into noise_sum.
  double signal = 0.0;
  std::vector<std::pair<std::uint32_t, double>> taken_noise;
  double noise_sum = 0.0;

  // classical only: cumulative length before each link (span-start power
  // computation) and the quantum lightpaths this one currently disturbs.
  std::vector<double> prefix_km;
  std::vector<std::uint32_t> given_to;

  bool operator==(const Lightpath&) const = default;
};

// Cache of canonical candidate enumerations, keyed by (source, dest,
// max_hops): all simple paths in canonical order.  A warmed instance can be
// shared read-only across threads; get_or_build is single-writer.
class CandidateCache {
 public:
  const std::vector<Path>* find(NodeId s, NodeId d,
                                std::uint32_t max_hops) const;
  const std::vector<Path>& get_or_build(const NetworkGraph& graph, NodeId s,
                                        NodeId d, std::uint32_t max_hops);
  // Builds every ordered (s, d) pair at the given hop bound.
  void warm(const NetworkGraph& graph, std::uint32_t max_hops);

 private:
  std::map<std::tuple<NodeId, NodeId, std::uint32_t>, std::vector<Path>> sets_;
};

struct GivenNoise {
  std::uint32_t quantum_id = 0;
  double noise_term = 0.0;    // pre-gamma contribution of the candidate
  double qsnr_db_after = 0.0; // that quantum channel's QSNR with it applied
};

// Everything needed to commit one admissible lightpath.
struct RouteSuccess {
  Path path;
  std::uint32_t wavelength = 0;
  double launch_power = 0.0;
  // quantum fills:
  std::optional<double> qsnr_db;
  double signal = 0.0;
  double noise_sum = 0.0;
  std::vector<std::pair<std::uint32_t, double>> taken_noise;
  // classical fills:
  std::vector<GivenNoise> given_noise;
};

struct RouteOutcome {
  std::optional<RouteSuccess> ok;
  BlockReason reason = BlockReason::NoPathOrWavelength;
};

struct ServeOutcome {
  std::vector<std::uint32_t> lightpath_ids;  // empty iff blocked
  std::optional<BlockReason> blocked;
  bool established() const { return !blocked.has_value(); }
};

// Mutable RWA state over one topology: established lightpaths, wavelength
// occupancy, and the admission machinery.  Single-writer; one simulation
// replication owns one state.
class NetworkState {
 public:
  NetworkState(NetworkGraph graph, ChannelParams params,
               std::shared_ptr<const CandidateCache> warm_cache = nullptr);

  // Serves a request atomically: all constituent lightpaths or none.
  ServeOutcome serve_request(const Request& request, const AlgorithmSpec& spec);
  // Removes every lightpath of the request; throws std::invalid_argument for
  // an unknown id.
  void release_request(std::uint32_t request_id);

  RouteOutcome route_lightpath_kspff(NodeId s, NodeId d, ChannelKind kind,
                                     const AlgorithmSpec& spec);
  enum class OverlapWeight { QuantumDistance, QuantumClassicalWeighted };
  RouteOutcome route_lightpath_overlap(NodeId s, NodeId d, ChannelKind kind,
                                       const AlgorithmSpec& spec,
                                       OverlapWeight weight);
  RouteOutcome route_lightpath_qtd(NodeId s, NodeId d, ChannelKind kind,
                                   const AlgorithmSpec& spec);

  // Total length of this path's links that carry at least one established
  // quantum lightpath (each link counted once).
  double shared_quantum_distance(const Path& path) const;
  // As above, but a quantum-shared link also carrying classical traffic
  // contributes twice its length.
  double weighted_shared_distance_mqcco(const Path& path) const;

  // QSNR of a hypothetical quantum lightpath on `path`, against the current
  // classical interferers; value iff it meets the threshold.
  std::optional<double> admit_quantum(const Path& path,
                                      double launch_power) const;
  // Whether a hypothetical classical lightpath would keep every established
  // quantum lightpath at or above the threshold.
  bool protects_established_quantum(const Path& candidate_path,
                                    double launch_power) const;

  const NetworkGraph& graph() const { return graph_; }
  const ChannelParams& params() const { return params_; }
  std::uint32_t n_established() const { return alive_; }
  // Alive lightpaths, ascending id.
  std::vector<const Lightpath*> established() const;
  const Lightpath* find_lightpath(std::uint32_t id) const;
  // qsnr_db of every established quantum lightpath, ascending id.
  std::vector<double> established_quantum_qsnr_db() const;

  // Exact comparison of observable state (graph occupancy, established set,
  // id counter) — the atomicity contract.
  bool deep_equal(const NetworkState& other) const;

 private:
  struct AdmitDetail {
    double qsnr_db_value;
    double signal;
    double noise_sum;
    std::vector<std::pair<std::uint32_t, double>> taken;
  };

  const std::vector<Path>& candidate_paths(NodeId s, NodeId d,
                                           std::uint32_t max_hops);
  std::uint32_t resolve_max_hops(const AlgorithmSpec& spec) const;
  RouteOutcome try_candidates(const std::vector<const Path*>& ordered,
                              ChannelKind kind, const AlgorithmSpec& spec,
                              double max_candidate_length_km);
  std::optional<AdmitDetail> admit_quantum_detail(const Path& path,
                                                  double launch_power) const;
  std::optional<std::vector<GivenNoise>> protection_detail(
      const Path& candidate_path, double launch_power) const;
  double marked_span_noise(std::span<const LinkId> classical_links,
                           std::span<const double> prefix_km,
                           double launch_power) const;
  std::uint32_t establish(RouteSuccess&& success, ChannelKind kind,
                          std::uint32_t request_id);
  void release_lightpath(std::uint32_t id);
  void mark_links(std::span<const LinkId> links) const;

  NetworkGraph graph_;
  ChannelParams params_;
  std::shared_ptr<const CandidateCache> warm_cache_;
  CandidateCache local_cache_;

  std::vector<std::optional<Lightpath>> established_;  // index == id
  std::uint32_t alive_ = 0;
  // Per-link ids of alive lightpaths crossing it, split by band, each list
  // ascending (append order; ids grow monotonically between releases).
  std::vector<std::vector<std::uint32_t>> q_on_link_;
  std::vector<std::vector<std::uint32_t>> c_on_link_;
  std::uint32_t links_with_quantum_ = 0;  // count of links with q_on_link_ non-empty

  // Epoch-stamped scratch marks (no clearing between uses).
  mutable std::vector<std::uint64_t> link_mark_;
  mutable std::uint64_t link_epoch_ = 0;
  mutable std::vector<std::uint64_t> lp_mark_;
  mutable std::uint64_t lp_epoch_ = 0;
};

}  // namespace qrwa
