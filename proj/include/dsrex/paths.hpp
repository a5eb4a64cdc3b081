#ifndef DSREX_PATHS_HPP
#define DSREX_PATHS_HPP

// Top-N cheapest simple paths between two nodes of a DocumentGraph.
//
// Yen's deviation search. Every spur search returns the smallest spur path
// under the order (cost, node sequence, edge sequence), which makes the
// whole enumeration follow that total order: equal-cost paths come out
// lexicographically by node id, and parallel edges give distinct paths.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsrex/common.hpp"
#include "dsrex/graph.hpp"

namespace dsrex {

struct Path {
  std::vector<NodeId> nodes;
  std::vector<int> edges;  // edge ids into the graph; edges[i] joins nodes[i], nodes[i+1]
  double cost = 0.0;

  std::size_t length() const { return nodes.size(); }

  /// True when edges[i] is traversed in its canonical (from -> to) direction.
  bool forward(const DocumentGraph &g, std::size_t i) const { return g.edge(edges[i]).from == nodes[i]; }

  bool operator==(const Path &) const = default;
};

/// Total order used for ranking and tie-breaking.
inline bool path_less(const Path &a, const Path &b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.edges < b.edges;
}

struct PathLess {
  bool operator()(const Path &a, const Path &b) const { return path_less(a, b); }
};

/// Sum of edge weights in traversal order.
inline double path_cost(const DocumentGraph &g, const std::vector<int> &edges) {
  double c = 0.0;
  for (int e : edges) c += g.edge(e).weight;
  return c;
}

/// Checks the Path invariants against `g`.
inline bool is_valid_path(const DocumentGraph &g, const Path &p) {
  if (p.nodes.empty() || p.edges.size() + 1 != p.nodes.size()) return false;
  std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
  if (seen.size() != p.nodes.size()) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Edge &e = g.edge(p.edges[i]);
    bool joins = (e.from == p.nodes[i] && e.to == p.nodes[i + 1]) || (e.to == p.nodes[i] && e.from == p.nodes[i + 1]);
    if (!joins) return false;
  }
  return p.cost == path_cost(g, p.edges);
}

struct PathSearchOptions {
  std::size_t max_expansions = 10000;  // spur searches per query
};

namespace detail {

// Distances to `dst` over the graph minus excluded nodes/edges.
inline std::vector<double> distances_to(const DocumentGraph &g, NodeId dst, const std::vector<char> &node_blocked,
                                        const std::vector<char> &edge_blocked) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.node_count(), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<std::size_t>(dst)] = 0.0;
  heap.push({0.0, dst});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (int eid : g.incident(u)) {
      if (edge_blocked[static_cast<std::size_t>(eid)]) continue;
      const Edge &e = g.edge(eid);
      NodeId v = e.other(u);
      if (node_blocked[static_cast<std::size_t>(v)]) continue;
      double nd = d + e.weight;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

// Smallest spur path from `src` to `dst` under (cost, nodes, edges).
// Walks greedily along tight edges, preferring the smallest next node and
// then the smallest edge id. Positive weights keep the walk simple.
inline bool smallest_path(const DocumentGraph &g, NodeId src, NodeId dst, const std::vector<char> &node_blocked,
                          const std::vector<char> &edge_blocked, std::vector<NodeId> &nodes, std::vector<int> &edges) {
  auto dist = distances_to(g, dst, node_blocked, edge_blocked);
  if (!std::isfinite(dist[static_cast<std::size_t>(src)])) return false;
  nodes.assign(1, src);
  edges.clear();
  NodeId u = src;
  while (u != dst) {
    NodeId best_v = -1;
    int best_e = -1;
    for (int eid : g.incident(u)) {
      if (edge_blocked[static_cast<std::size_t>(eid)]) continue;
      const Edge &e = g.edge(eid);
      NodeId v = e.other(u);
      if (node_blocked[static_cast<std::size_t>(v)]) continue;
      if (e.weight + dist[static_cast<std::size_t>(v)] != dist[static_cast<std::size_t>(u)]) continue;
      if (best_v < 0 || v < best_v || (v == best_v && eid < best_e)) {
        best_v = v;
        best_e = eid;
      }
    }
    if (best_v < 0) return false;  // unreachable for consistent distances
    nodes.push_back(best_v);
    edges.push_back(best_e);
    u = best_v;
  }
  return true;
}

}  // namespace detail

/// The `n` cheapest simple paths from `src` to `dst` in (cost, nodes, edges)
/// order. Fewer are returned when fewer exist or when the expansion cap is
/// hit (counted as "path_search_capped" in `diag`). Disconnected endpoints
/// yield an empty list.
inline std::vector<Path> top_k_paths(const DocumentGraph &g, NodeId src, NodeId dst, std::size_t n,
                                     const PathSearchOptions &opts = {}, Diagnostics *diag = nullptr) {
  if (src == dst) throw std::invalid_argument("top_k_paths: src == dst");
  if (n == 0) throw std::invalid_argument("top_k_paths: n must be >= 1");
  if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= g.node_count() ||
      static_cast<std::size_t>(dst) >= g.node_count())
    throw std::out_of_range("top_k_paths: node out of range");

  std::vector<char> node_blocked(g.node_count(), 0);
  std::vector<char> edge_blocked(g.edges().size(), 0);
  std::vector<Path> accepted;
  {
    Path first;
    if (!detail::smallest_path(g, src, dst, node_blocked, edge_blocked, first.nodes, first.edges)) return accepted;
    first.cost = path_cost(g, first.edges);
    accepted.push_back(std::move(first));
  }

  std::set<Path, PathLess> candidates;
  std::size_t expansions = 0;
  bool capped = false;
  std::vector<NodeId> spur_nodes;
  std::vector<int> spur_edges;

  while (accepted.size() < n && !capped) {
    const Path prev = accepted.back();
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      if (expansions >= opts.max_expansions) {
        capped = true;
        break;
      }
      ++expansions;
      const NodeId spur = prev.nodes[i];

      std::vector<int> blocked_edges;
      for (const Path &p : accepted) {
        if (p.nodes.size() <= i + 1) continue;
        if (!std::equal(prev.nodes.begin(), prev.nodes.begin() + static_cast<std::ptrdiff_t>(i + 1), p.nodes.begin()))
          continue;
        if (!std::equal(prev.edges.begin(), prev.edges.begin() + static_cast<std::ptrdiff_t>(i), p.edges.begin()))
          continue;
        blocked_edges.push_back(p.edges[i]);
      }
      for (int e : blocked_edges) edge_blocked[static_cast<std::size_t>(e)] = 1;
      for (std::size_t r = 0; r < i; ++r) node_blocked[static_cast<std::size_t>(prev.nodes[r])] = 1;

      if (detail::smallest_path(g, spur, dst, node_blocked, edge_blocked, spur_nodes, spur_edges)) {
        Path cand;
        cand.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + static_cast<std::ptrdiff_t>(i));
        cand.nodes.insert(cand.nodes.end(), spur_nodes.begin(), spur_nodes.end());
        cand.edges.assign(prev.edges.begin(), prev.edges.begin() + static_cast<std::ptrdiff_t>(i));
        cand.edges.insert(cand.edges.end(), spur_edges.begin(), spur_edges.end());
        cand.cost = path_cost(g, cand.edges);
        candidates.insert(std::move(cand));
      }

      for (int e : blocked_edges) edge_blocked[static_cast<std::size_t>(e)] = 0;
      for (std::size_t r = 0; r < i; ++r) node_blocked[static_cast<std::size_t>(prev.nodes[r])] = 0;
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  if (capped && diag) diag->count("path_search_capped");
  if (accepted.size() > n) accepted.resize(n);
  return accepted;
}

/// Traversal-direction glyph for edge i of `p`: "↓" along the canonical
/// direction, "↑" against it, empty for undirected kinds.
inline std::string direction_glyph(const DocumentGraph &g, const Path &p, std::size_t i) {
  if (!edge_kind_directed(g.edge(p.edges[i]).kind)) return "";
  return p.forward(g, i) ? "\xE2\x86\x93" : "\xE2\x86\x91";
}

/// `cost<TAB>n_1 -[kind:label:dir]- n_2 ...`
inline std::string format_path(const DocumentGraph &g, const Path &p) {
  std::ostringstream os;
  os << p.cost << '\t' << g.node(p.nodes[0]).surface;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Edge &e = g.edge(p.edges[i]);
    std::string dir = direction_glyph(g, p, i);
    os << " -[" << edge_kind_name(e.kind) << ':' << e.label << ':' << (dir.empty() ? "-" : dir) << "]- "
       << g.node(p.nodes[i + 1]).surface;
  }
  return os.str();
}

}  // namespace dsrex

#endif  // DSREX_PATHS_HPP
