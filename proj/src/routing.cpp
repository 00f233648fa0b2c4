#include "qrwa/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace qrwa {

namespace {

double sum_left_to_right(const NetworkGraph& graph,
                         const std::vector<LinkId>& links) {
  double total = 0.0;
  for (LinkId id : links) total += graph.link(id).length_km;
  return total;
}

void check_endpoints(const NetworkGraph& graph, NodeId s, NodeId d) {
  if (s >= graph.n_nodes() || d >= graph.n_nodes())
    throw std::invalid_argument("routing: node id out of range");
  if (s == d) throw std::invalid_argument("routing: source equals destination");
}

constexpr std::uint32_t kNoHops = std::numeric_limits<std::uint32_t>::max();

struct Label {
  double dist = std::numeric_limits<double>::infinity();
  std::uint32_t hops = kNoHops;
  LinkId parent = kInvalidLink;
  bool settled = false;
};

std::vector<NodeId> walk_nodes(const NetworkGraph& graph,
                               const std::vector<Label>& labels, NodeId x) {
  std::vector<NodeId> seq{x};
  while (labels[x].parent != kInvalidLink) {
    x = graph.link(labels[x].parent).from;
    seq.push_back(x);
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

std::vector<LinkId> walk_links(const NetworkGraph& graph,
                               const std::vector<Label>& labels, NodeId x) {
  std::vector<LinkId> seq;
  while (labels[x].parent != kInvalidLink) {
    seq.push_back(labels[x].parent);
    x = graph.link(labels[x].parent).from;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

// With (dist, hops) already tied, decides whether arriving at v through u and
// link e beats the incumbent parent chain of v under the canonical order.
bool candidate_wins_tie(const NetworkGraph& graph,
                        const std::vector<Label>& labels, NodeId u, LinkId e,
                        NodeId v) {
  std::vector<NodeId> cand_nodes = walk_nodes(graph, labels, u);
  cand_nodes.push_back(v);
  const std::vector<NodeId> inc_nodes = walk_nodes(graph, labels, v);
  if (cand_nodes != inc_nodes) return cand_nodes < inc_nodes;
  std::vector<LinkId> cand_links = walk_links(graph, labels, u);
  cand_links.push_back(e);
  return cand_links < walk_links(graph, labels, v);
}

// banned_links / banned_nodes may be null (nothing banned).  The banned-node
// mask applies to intermediate hops: s itself must not be banned by callers.
std::optional<Path> dijkstra(const NetworkGraph& graph, NodeId s, NodeId d,
                             const std::vector<char>* banned_links,
                             const std::vector<char>* banned_nodes) {
  struct Entry {
    double dist;
    std::uint32_t hops;
    NodeId node;
  };
  struct EntryAfter {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.dist != b.dist) return a.dist > b.dist;
      if (a.hops != b.hops) return a.hops > b.hops;
      return a.node > b.node;
    }
  };
  std::vector<Label> labels(graph.n_nodes());
  labels[s] = Label{0.0, 0, kInvalidLink, false};
  std::priority_queue<Entry, std::vector<Entry>, EntryAfter> queue;
  queue.push({0.0, 0, s});
  while (!queue.empty()) {
    const Entry top = queue.top();
    queue.pop();
    Label& lu = labels[top.node];
    if (lu.settled || top.dist != lu.dist || top.hops != lu.hops) continue;
    lu.settled = true;
    if (top.node == d) break;
    for (LinkId id : graph.out_links(top.node)) {
      if (banned_links && (*banned_links)[id]) continue;
      const Link& link = graph.link(id);
      const NodeId v = link.to;
      if (banned_nodes && (*banned_nodes)[v]) continue;
      Label& lv = labels[v];
      if (lv.settled) continue;
      const double nd = lu.dist + link.length_km;
      const std::uint32_t nh = lu.hops + 1;
      if (nd < lv.dist || (nd == lv.dist && nh < lv.hops)) {
        lv.dist = nd;
        lv.hops = nh;
        lv.parent = id;
        queue.push({nd, nh, v});
      } else if (nd == lv.dist && nh == lv.hops &&
                 candidate_wins_tie(graph, labels, top.node, id, v)) {
        // Same cost: reparent only.  The queue entry already present for
        // (nd, nh, v) still matches the label, so no push is needed.
        lv.parent = id;
      }
    }
  }
  if (!labels[d].settled) return std::nullopt;
  return make_path(graph, walk_links(graph, labels, d));
}

}  // namespace

Path make_path(const NetworkGraph& graph, std::vector<LinkId> links) {
  if (links.empty()) throw std::invalid_argument("make_path: empty link list");
  Path p;
  p.nodes.reserve(links.size() + 1);
  p.nodes.push_back(graph.link(links.front()).from);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = graph.link(links[i]);
    if (l.from != p.nodes.back())
      throw std::invalid_argument("make_path: non-contiguous link sequence");
    p.nodes.push_back(l.to);
  }
  p.length_km = sum_left_to_right(graph, links);
  p.links = std::move(links);
  return p;
}

bool path_order_less(const Path& a, const Path& b) {
  if (a.length_km != b.length_km) return a.length_km < b.length_km;
  if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.links < b.links;
}

std::optional<Path> shortest_path(const NetworkGraph& graph, NodeId s,
                                  NodeId d) {
  check_endpoints(graph, s, d);
  return dijkstra(graph, s, d, nullptr, nullptr);
}

std::vector<Path> k_shortest_paths(const NetworkGraph& graph, NodeId s,
                                   NodeId d, std::uint32_t k) {
  check_endpoints(graph, s, d);
  if (k == 0) throw std::invalid_argument("k_shortest_paths: k must be >= 1");
  std::vector<Path> found;
  auto first = dijkstra(graph, s, d, nullptr, nullptr);
  if (!first) return found;
  found.push_back(std::move(*first));
  std::set<Path, PathOrderLess> candidates;
  std::set<std::vector<LinkId>> known{found.front().links};
  std::vector<char> banned_links(graph.n_links(), 0);
  std::vector<char> banned_nodes(graph.n_nodes(), 0);
  while (found.size() < k) {
    const Path prev = found.back();
    for (std::uint32_t j = 0; j < prev.hops(); ++j) {
      const NodeId spur_node = prev.nodes[j];
      std::fill(banned_links.begin(), banned_links.end(), 0);
      std::fill(banned_nodes.begin(), banned_nodes.end(), 0);
      // Ban the next edge of every known path sharing the root prefix, and
      // the root's interior nodes, so the spur search cannot regenerate a
      // found path or revisit the root.
      for (const Path& p : found) {
        if (p.links.size() > j &&
            std::equal(p.links.begin(), p.links.begin() + j,
                       prev.links.begin()))
          banned_links[p.links[j]] = 1;
      }
      for (std::uint32_t jj = 0; jj < j; ++jj) banned_nodes[prev.nodes[jj]] = 1;
      auto spur = dijkstra(graph, spur_node, d, &banned_links, &banned_nodes);
      if (!spur) continue;
      std::vector<LinkId> links(prev.links.begin(), prev.links.begin() + j);
      links.insert(links.end(), spur->links.begin(), spur->links.end());
      if (known.insert(links).second)
        candidates.insert(make_path(graph, std::move(links)));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

std::vector<Path> all_simple_paths(const NetworkGraph& graph, NodeId s,
                                   NodeId d, std::uint32_t max_hops) {
  check_endpoints(graph, s, d);
  if (max_hops == 0)
    throw std::invalid_argument("all_simple_paths: max_hops must be >= 1");
  std::vector<Path> result;
  std::vector<char> visited(graph.n_nodes(), 0);
  std::vector<LinkId> stack;
  visited[s] = 1;
  auto dfs = [&](auto&& self, NodeId u) -> void {
    for (LinkId id : graph.out_links(u)) {
      const NodeId v = graph.link(id).to;
      if (v == d) {
        if (stack.size() + 1 <= max_hops) {
          stack.push_back(id);
          result.push_back(make_path(graph, stack));
          stack.pop_back();
        }
      } else if (!visited[v] && stack.size() + 1 < max_hops) {
        visited[v] = 1;
        stack.push_back(id);
        self(self, v);
        stack.pop_back();
        visited[v] = 0;
      }
    }
  };
  dfs(dfs, s);
  std::sort(result.begin(), result.end(), path_order_less);
  return result;
}

}  // namespace qrwa
