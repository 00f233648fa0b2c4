#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrwa {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

inline constexpr LinkId kInvalidLink = std::numeric_limits<LinkId>::max();

// Occupancy bitmap over the wavelength grid of one fiber link.
class WavelengthSet {
 public:
  WavelengthSet() = default;
  explicit WavelengthSet(std::uint32_t n_wavelengths)
      : size_(n_wavelengths), words_((n_wavelengths + 63) / 64, 0) {}

  std::uint32_t size() const { return size_; }
  bool test(std::uint32_t w) const {
    return (words_[w >> 6] >> (w & 63)) & 1u;
  }
  void set(std::uint32_t w) { words_[w >> 6] |= std::uint64_t{1} << (w & 63); }
  void reset(std::uint32_t w) {
    words_[w >> 6] &= ~(std::uint64_t{1} << (w & 63));
  }
  std::uint32_t count() const;
  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const WavelengthSet&) const = default;

 private:
  std::uint32_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// One directed fiber link.  Fibers are laid in pairs: for every link a->b the
// graph holds a reverse link b->a of the same length (separate occupancy).
struct Link {
  LinkId id = kInvalidLink;
  NodeId from = 0;
  NodeId to = 0;
  double length_km = 0.0;
  WavelengthSet occupancy;

  bool operator==(const Link&) const = default;
};

// Parameters for random topology generation (Erdos-Renyi with a minimum-degree
// repair pass and a connectivity retry loop).
struct TopologyConfig {
  std::uint32_t n_nodes_min = 5;
  std::uint32_t n_nodes_max = 10;
  double link_probability = 0.5;
  double length_min_km = 10.0;
  double length_max_km = 20.0;
  std::uint32_t min_degree = 2;
  std::uint32_t w_total = 80;
  std::uint32_t w_quantum = 40;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Directed multigraph with per-link wavelength occupancy.  The wavelength
// grid is split into a quantum band [0, w_quantum) and a classical band
// [w_quantum, w_total); every link carries the full grid.
//
// Construction protocol: add links (normally with add_fiber_pair), then call
// finalize() once.  finalize() builds the adjacency index and enforces the
// structural invariants; mutation of the link set afterwards is not allowed.
class NetworkGraph {
 public:
  NetworkGraph(std::uint32_t n_nodes, std::uint32_t w_total,
               std::uint32_t w_quantum);

  LinkId add_link(NodeId from, NodeId to, double length_km);
  // Adds a->b and b->a with the same length; returns the first id.
  LinkId add_fiber_pair(NodeId a, NodeId b, double length_km);
  // Sorts adjacency (by destination node, then link id) and validates:
  // every link is paired, lengths positive, endpoints in range.
  void finalize();

  std::uint32_t n_nodes() const { return n_nodes_; }
  std::uint32_t n_links() const { return static_cast<std::uint32_t>(links_.size()); }
  std::uint32_t w_total() const { return w_total_; }
  std::uint32_t w_quantum() const { return w_quantum_; }

  const Link& link(LinkId id) const { return links_[id]; }
  const std::vector<Link>& links() const { return links_; }
  // Outgoing links of `node`, sorted by (destination, id).
  std::span<const LinkId> out_links(NodeId node) const {
    return out_links_[node];
  }

  void set_occupied(LinkId id, std::uint32_t wavelength) {
    links_[id].occupancy.set(wavelength);
  }
  void clear_occupied(LinkId id, std::uint32_t wavelength) {
    links_[id].occupancy.reset(wavelength);
  }

  bool wavelength_free_on_path(std::span<const LinkId> path,
                               std::uint32_t wavelength) const;
  // First-fit scan: lowest free-on-every-link index in [band_begin, band_end),
  // or nullopt.
  std::optional<std::uint32_t> first_free_wavelength(
      std::span<const LinkId> path, std::uint32_t band_begin,
      std::uint32_t band_end) const;

  bool operator==(const NetworkGraph&) const = default;

 private:
  std::uint32_t n_nodes_;
  std::uint32_t w_total_;
  std::uint32_t w_quantum_;
  bool finalized_ = false;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_links_;
};

// True if every node reaches every other (treating fiber pairs as undirected
// edges, which finalize() guarantees they are).
bool is_connected(const NetworkGraph& graph);

// Random connected topology: sample n uniformly from the configured node
// range, include each node pair independently with link_probability, repair
// nodes under min_degree by wiring them to uniformly chosen non-neighbours,
// then retry the whole draw (fresh randomness) until connected.
// Throws std::runtime_error after 1000 failed attempts.
NetworkGraph generate_random_topology(const TopologyConfig& config,
                                      std::uint64_t seed);

// Plain-text topology exchange format:
//   nodes=<n> wt=<w_total> wq=<w_quantum>
//   <from> <to> <length_km>      (one directed link per line)
// Lengths are written round-trip exact (max_digits10).  Occupancy is not
// part of the format; read_topology returns an all-free graph.
void write_topology(const NetworkGraph& graph, std::ostream& out);
void write_topology_file(const NetworkGraph& graph, const std::string& path);
NetworkGraph read_topology(std::istream& in);
NetworkGraph read_topology_file(const std::string& path);

}  // namespace qrwa
