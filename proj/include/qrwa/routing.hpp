#pragma once

#include <optional>
#include <vector>

#include "qrwa/topology.hpp"

namespace qrwa {

// A simple directed path.  `nodes` always has links.size()+1 entries and
// length_km is the left-to-right sum of link lengths — recomputed that way in
// every code path, so equal-length ties compare bit-identically no matter how
// a path was produced.
struct Path {
  std::vector<LinkId> links;
  std::vector<NodeId> nodes;
  double length_km = 0.0;

  std::uint32_t hops() const { return static_cast<std::uint32_t>(links.size()); }
  bool operator==(const Path&) const = default;
};

// Builds a Path from a link sequence: validates contiguity, derives the node
// sequence, sums the length left to right.  Throws std::invalid_argument on
// an empty or non-contiguous sequence.
Path make_path(const NetworkGraph& graph, std::vector<LinkId> links);

// The canonical total order on paths: (length_km, hop count, lexicographic
// node sequence, lexicographic link-id sequence).  Total on distinct paths.
bool path_order_less(const Path& a, const Path& b);

struct PathOrderLess {
  bool operator()(const Path& a, const Path& b) const {
    return path_order_less(a, b);
  }
};

// Dijkstra under the canonical order (ties fully resolved), so the returned
// path is the unique minimum.  nullopt when d is unreachable.
std::optional<Path> shortest_path(const NetworkGraph& graph, NodeId s, NodeId d);

// Yen's algorithm on top of the ordered Dijkstra; returns up to k loopless
// paths in canonical ascending order.  Fewer than k exist -> all of them.
std::vector<Path> k_shortest_paths(const NetworkGraph& graph, NodeId s,
                                   NodeId d, std::uint32_t k);

// Every simple path from s to d with at most max_hops links, sorted by the
// canonical order.
std::vector<Path> all_simple_paths(const NetworkGraph& graph, NodeId s,
                                   NodeId d, std::uint32_t max_hops);

}  // namespace qrwa
