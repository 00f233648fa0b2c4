#include "qrwa/topology.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qrwa/rng.hpp"

namespace qrwa {

std::uint32_t WavelengthSet::count() const {
  std::uint32_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::uint32_t>(std::popcount(w));
  return n;
}

void TopologyConfig::validate() const {
  if (n_nodes_min < 2) throw std::invalid_argument("topology: n_nodes_min must be >= 2");
  if (n_nodes_max < n_nodes_min)
    throw std::invalid_argument("topology: n_nodes_max must be >= n_nodes_min");
  if (!(link_probability >= 0.0 && link_probability <= 1.0))
    throw std::invalid_argument("topology: link_probability must be in [0, 1]");
  if (!(length_min_km > 0.0))
    throw std::invalid_argument("topology: length_min_km must be > 0");
  if (length_max_km < length_min_km)
    throw std::invalid_argument("topology: length_max_km must be >= length_min_km");
  if (min_degree >= n_nodes_min)
    throw std::invalid_argument("topology: min_degree must be < n_nodes_min");
  if (w_total == 0) throw std::invalid_argument("topology: w_total must be > 0");
  if (w_quantum > w_total)
    throw std::invalid_argument("topology: w_quantum must be <= w_total");
}

NetworkGraph::NetworkGraph(std::uint32_t n_nodes, std::uint32_t w_total,
                           std::uint32_t w_quantum)
    : n_nodes_(n_nodes), w_total_(w_total), w_quantum_(w_quantum) {
  if (n_nodes == 0) throw std::invalid_argument("graph: n_nodes must be > 0");
  if (w_total == 0) throw std::invalid_argument("graph: w_total must be > 0");
  if (w_quantum > w_total)
    throw std::invalid_argument("graph: w_quantum must be <= w_total");
}

LinkId NetworkGraph::add_link(NodeId from, NodeId to, double length_km) {
  if (finalized_) throw std::logic_error("graph: add_link after finalize");
  if (from >= n_nodes_ || to >= n_nodes_)
    throw std::invalid_argument("graph: link endpoint out of range");
  if (from == to) throw std::invalid_argument("graph: self-loop link");
  if (!(length_km > 0.0))
    throw std::invalid_argument("graph: link length must be > 0");
  const LinkId id = static_cast<LinkId>(links_.size());
  links_.push_back(Link{id, from, to, length_km, WavelengthSet(w_total_)});
  return id;
}

LinkId NetworkGraph::add_fiber_pair(NodeId a, NodeId b, double length_km) {
  const LinkId id = add_link(a, b, length_km);
  add_link(b, a, length_km);
  return id;
}

void NetworkGraph::finalize() {
  if (finalized_) throw std::logic_error("graph: finalize called twice");
  out_links_.assign(n_nodes_, {});
  for (const Link& l : links_) out_links_[l.from].push_back(l.id);
  for (auto& adj : out_links_) {
    std::sort(adj.begin(), adj.end(), [&](LinkId x, LinkId y) {
      const Link& a = links_[x];
      const Link& b = links_[y];
      if (a.to != b.to) return a.to < b.to;
      return a.id < b.id;
    });
  }
  // Pairing check: count directed links per (from, to, length) and demand the
  // reversed key matches.
  std::vector<std::tuple<NodeId, NodeId, double>> keys;
  keys.reserve(links_.size());
  for (const Link& l : links_) keys.emplace_back(l.from, l.to, l.length_km);
  std::sort(keys.begin(), keys.end());
  for (const Link& l : links_) {
    const auto want = std::make_tuple(l.to, l.from, l.length_km);
    const auto [lo, hi] = std::equal_range(keys.begin(), keys.end(), want);
    const auto self = std::make_tuple(l.from, l.to, l.length_km);
    const auto [slo, shi] = std::equal_range(keys.begin(), keys.end(), self);
    if ((hi - lo) != (shi - slo))
      throw std::invalid_argument("graph: unpaired directed link " +
                                  std::to_string(l.from) + "->" +
                                  std::to_string(l.to));
  }
  finalized_ = true;
}

bool NetworkGraph::wavelength_free_on_path(std::span<const LinkId> path,
                                           std::uint32_t wavelength) const {
  if (wavelength >= w_total_)
    throw std::out_of_range("graph: wavelength index out of range");
  for (LinkId id : path) {
    if (links_.at(id).occupancy.test(wavelength)) return false;
  }
  return true;
}

std::optional<std::uint32_t> NetworkGraph::first_free_wavelength(
    std::span<const LinkId> path, std::uint32_t band_begin,
    std::uint32_t band_end) const {
  if (band_end > w_total_ || band_begin > band_end)
    throw std::out_of_range("graph: wavelength band out of range");
  const std::uint32_t word_lo = band_begin >> 6;
  const std::uint32_t word_hi = (band_end + 63) >> 6;
  for (std::uint32_t w = word_lo; w < word_hi; ++w) {
    std::uint64_t occupied = 0;
    for (LinkId id : path) occupied |= links_[id].occupancy.words()[w];
    std::uint64_t free = ~occupied;
    // Mask bits outside [band_begin, band_end).
    const std::uint32_t base = w << 6;
    if (band_begin > base) free &= ~std::uint64_t{0} << (band_begin - base);
    if (band_end < base + 64)
      free &= (std::uint64_t{1} << (band_end - base)) - 1;
    if (free != 0)
      return base + static_cast<std::uint32_t>(std::countr_zero(free));
  }
  return std::nullopt;
}

bool is_connected(const NetworkGraph& graph) {
  const std::uint32_t n = graph.n_nodes();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::uint32_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (LinkId id : graph.out_links(u)) {
      const NodeId v = graph.link(id).to;
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

NetworkGraph generate_random_topology(const TopologyConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  SplitMix64 rng(seed);
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint32_t n = static_cast<std::uint32_t>(
        rng.uniform_int(config.n_nodes_min, config.n_nodes_max));
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<std::uint32_t> degree(n, 0);
    struct Edge {
      NodeId a, b;
      double length;
    };
    std::vector<Edge> edges;
    auto connect = [&](NodeId a, NodeId b, double len) {
      adj[a][b] = adj[b][a] = 1;
      ++degree[a];
      ++degree[b];
      edges.push_back({a, b, len});
    };
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (rng.next_double() < config.link_probability)
          connect(a, b,
                  rng.uniform_real(config.length_min_km, config.length_max_km));
      }
    }
    // Repair pass: wire each under-degree node to uniformly chosen
    // non-neighbours (ascending node order; candidate list re-drawn per added
    // edge since each addition raises the partner's degree too).
    for (NodeId u = 0; u < n; ++u) {
      while (degree[u] < config.min_degree) {
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < n; ++v) {
          if (v != u && !adj[u][v]) candidates.push_back(v);
        }
        if (candidates.empty())
          throw std::runtime_error("topology generation: no repair candidate");
        const NodeId v = candidates[rng.next_below(candidates.size())];
        connect(u, v,
                rng.uniform_real(config.length_min_km, config.length_max_km));
      }
    }
    NetworkGraph graph(n, config.w_total, config.w_quantum);
    for (const Edge& e : edges) graph.add_fiber_pair(e.a, e.b, e.length);
    graph.finalize();
    if (is_connected(graph)) return graph;
  }
  throw std::runtime_error(
      "topology generation: no connected draw in 1000 attempts");
}

void write_topology(const NetworkGraph& graph, std::ostream& out) {
  out << "nodes=" << graph.n_nodes() << " wt=" << graph.w_total()
      << " wq=" << graph.w_quantum() << "\n";
  char buf[64];
  for (const Link& l : graph.links()) {
    const auto res = std::to_chars(buf, buf + sizeof buf, l.length_km,
                                   std::chars_format::general);
    out << l.from << " " << l.to << " "
        << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << "\n";
  }
}

void write_topology_file(const NetworkGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_topology(graph, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

NetworkGraph read_topology(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("topology file: missing header line");
  std::uint32_t n = 0, wt = 0, wq = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    bool have_n = false, have_wt = false, have_wq = false;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("topology file: bad header token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      std::uint32_t parsed = 0;
      const auto [p, ec] =
          std::from_chars(val.data(), val.data() + val.size(), parsed);
      if (ec != std::errc{} || p != val.data() + val.size())
        throw std::runtime_error("topology file: bad header value '" + tok + "'");
      if (key == "nodes") { n = parsed; have_n = true; }
      else if (key == "wt") { wt = parsed; have_wt = true; }
      else if (key == "wq") { wq = parsed; have_wq = true; }
      else throw std::runtime_error("topology file: unknown header key '" + key + "'");
    }
    if (!have_n || !have_wt || !have_wq)
      throw std::runtime_error("topology file: header must set nodes, wt, wq");
  }
  NetworkGraph graph(n, wt, wq);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    NodeId from, to;
    double length;
    if (!(ls >> from >> to >> length))
      throw std::runtime_error("topology file: bad link line " +
                               std::to_string(line_no));
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("topology file: trailing data on line " +
                               std::to_string(line_no));
    graph.add_link(from, to, length);
  }
  graph.finalize();
  return graph;
}

NetworkGraph read_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  return read_topology(in);
}

}  // namespace qrwa
