#ifndef DSREX_GRAPH_HPP
#define DSREX_GRAPH_HPP

// Document graph: one node per word of the document, with typed edges for
// dependencies, word adjacency, sentence-root links, discourse relations and
// coreference. Search treats every edge as undirected; the stored
// (from, to) order is the canonical direction used when rendering features.

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dsrex/common.hpp"
#include "dsrex/corpus.hpp"

namespace dsrex {

using NodeId = int;

enum class EdgeKind : std::uint8_t { kDependency = 0, kAdjacency = 1, kNextSent = 2, kDiscourse = 3, kCoref = 4 };

inline constexpr int kEdgeKindCount = 5;

inline const char *edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::kDependency: return "dep";
    case EdgeKind::kAdjacency: return "adj";
    case EdgeKind::kNextSent: return "nextsent";
    case EdgeKind::kDiscourse: return "disc";
    case EdgeKind::kCoref: return "coref";
  }
  return "?";
}

/// Whether traversal direction is meaningful for the kind.
inline bool edge_kind_directed(EdgeKind k) {
  return k == EdgeKind::kDependency || k == EdgeKind::kDiscourse || k == EdgeKind::kCoref;
}

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  EdgeKind kind = EdgeKind::kDependency;
  std::string label;  // dependency / discourse label; empty otherwise
  double weight = 1.0;

  NodeId other(NodeId n) const { return n == from ? to : from; }
  bool operator==(const Edge &) const = default;
};

struct GraphConfig {
  double adjacency_weight = 16.0;
  bool dependency = true;
  bool adjacency = true;
  bool nextsent = true;
  bool discourse = true;
  bool coref = true;

  bool enabled(EdgeKind k) const {
    switch (k) {
      case EdgeKind::kDependency: return dependency;
      case EdgeKind::kAdjacency: return adjacency;
      case EdgeKind::kNextSent: return nextsent;
      case EdgeKind::kDiscourse: return discourse;
      case EdgeKind::kCoref: return coref;
    }
    return false;
  }

  void validate() const {
    if (!(adjacency_weight > 0.0) || !std::isfinite(adjacency_weight))
      throw ValidationError("graph.adjacency_weight must be a positive finite number");
    if (!(dependency || adjacency || nextsent || discourse || coref))
      throw ValidationError("graph: at least one edge kind must be enabled");
  }
};

struct NodeAttributes {
  std::string surface;
  std::string lemma;
  std::string pos;
  int sentence = 0;
  int token = 0;
};

class DocumentGraph {
 public:
  DocumentGraph() = default;
  explicit DocumentGraph(std::vector<NodeAttributes> nodes)
      : nodes_(std::move(nodes)), incident_(nodes_.size()) {}

  std::size_t node_count() const { return nodes_.size(); }
  const NodeAttributes &node(NodeId n) const { return nodes_[static_cast<std::size_t>(n)]; }
  const std::vector<Edge> &edges() const { return edges_; }
  const Edge &edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

  /// Edge ids touching `n`, in insertion order.
  const std::vector<int> &incident(NodeId n) const { return incident_[static_cast<std::size_t>(n)]; }

  /// Adds an edge unless an identical (from, to, kind, label) edge exists.
  /// Returns true when the edge was added.
  bool add_edge(NodeId from, NodeId to, EdgeKind kind, std::string label, double weight) {
    if (from == to) throw std::invalid_argument("self edge");
    if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= nodes_.size() ||
        static_cast<std::size_t>(to) >= nodes_.size())
      throw std::out_of_range("edge endpoint out of range");
    if (!keys_.emplace(from, to, kind, label).second) return false;
    int id = static_cast<int>(edges_.size());
    edges_.push_back({from, to, kind, std::move(label), weight});
    incident_[static_cast<std::size_t>(from)].push_back(id);
    incident_[static_cast<std::size_t>(to)].push_back(id);
    return true;
  }

  std::size_t count(EdgeKind kind) const {
    std::size_t n = 0;
    for (const Edge &e : edges_) n += e.kind == kind;
    return n;
  }

 private:
  std::vector<NodeAttributes> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::set<std::tuple<NodeId, NodeId, EdgeKind, std::string>> keys_;
};

inline NodeId node_of(const Document &doc, int sentence, int token) { return doc.sentence_offset(sentence) + token; }

inline NodeId node_of_mention(const Document &doc, const Mention &m) { return node_of(doc, m.sentence, m.head); }

namespace detail {

// Undirected unit-weight adjacency over dependency arcs and sentence-root
// links only; discourse endpoints are chosen on this restricted graph.
inline std::vector<std::vector<NodeId>> restricted_adjacency(const Document &doc) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(doc.token_count()));
  auto link = [&](NodeId a, NodeId b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const int off = doc.sentence_offset(static_cast<int>(s));
    for (const DependencyArc &arc : doc.sentences[s].arcs) link(off + arc.head, off + arc.dependent);
    if (s + 1 < doc.sentences.size()) {
      link(off + doc.sentences[s].root, doc.sentence_offset(static_cast<int>(s + 1)) + doc.sentences[s + 1].root);
    }
  }
  return adj;
}

inline std::vector<int> bfs_distances(const std::vector<std::vector<NodeId>> &adj, NodeId src) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<NodeId> queue{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace detail

struct DiscourseEndpoints {
  NodeId u = -1;  // word in span 1
  NodeId v = -1;  // word in span 2
  int cost = 0;
};

/// Cheapest (u, v) with u in span1, v in span2, u != v, under the
/// dependency + sentence-root edge set; ties go to the smallest (u, v).
/// Returns u = -1 when no such pair is connected.
inline DiscourseEndpoints discourse_endpoints(const DiscourseRelation &rel,
                                              const std::vector<std::vector<NodeId>> &restricted) {
  DiscourseEndpoints best;
  for (NodeId u = rel.span1.first; u <= rel.span1.last; ++u) {
    auto dist = detail::bfs_distances(restricted, u);
    for (NodeId v = rel.span2.first; v <= rel.span2.last; ++v) {
      int d = dist[static_cast<std::size_t>(v)];
      if (u == v || d < 0) continue;
      if (best.u < 0 || d < best.cost) best = {u, v, d};
    }
  }
  return best;
}

/// Adds one DISCOURSE(label) edge per connectable relation. Disconnected
/// relations are counted under "discourse_skipped".
inline std::size_t insert_discourse_edges(DocumentGraph &graph, const Document &doc, Diagnostics *diag = nullptr) {
  if (doc.discourse.empty()) return 0;
  auto restricted = detail::restricted_adjacency(doc);
  std::size_t added = 0;
  for (const DiscourseRelation &rel : doc.discourse) {
    DiscourseEndpoints ep = discourse_endpoints(rel, restricted);
    if (ep.u < 0) {
      if (diag) diag->count("discourse_skipped");
      continue;
    }
    added += graph.add_edge(ep.u, ep.v, EdgeKind::kDiscourse, rel.label, 1.0);
  }
  return added;
}

/// One COREF edge per link, anaphor -> antecedent; duplicates collapse.
inline std::size_t insert_coref_edges(DocumentGraph &graph, const Document &doc) {
  std::size_t added = 0;
  for (const CorefLink &link : doc.coref) {
    NodeId from = node_of(doc, link.anaphor.sentence, link.anaphor.token);
    NodeId to = node_of(doc, link.antecedent.sentence, link.antecedent.token);
    added += graph.add_edge(from, to, EdgeKind::kCoref, "", 1.0);
  }
  return added;
}

inline DocumentGraph build_graph(const Document &doc, const GraphConfig &cfg, Diagnostics *diag = nullptr) {
  std::vector<NodeAttributes> nodes;
  nodes.reserve(static_cast<std::size_t>(doc.token_count()));
  for (const Sentence &s : doc.sentences)
    for (const Token &t : s.tokens) nodes.push_back({t.surface, t.lemma, t.pos, s.index, t.index});
  DocumentGraph g(std::move(nodes));

  int off = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence &sent = doc.sentences[s];
    if (cfg.dependency) {
      for (const DependencyArc &arc : sent.arcs)
        g.add_edge(off + arc.head, off + arc.dependent, EdgeKind::kDependency, arc.label, 1.0);
    }
    if (cfg.adjacency) {
      for (int t = 0; t + 1 < static_cast<int>(sent.tokens.size()); ++t)
        g.add_edge(off + t, off + t + 1, EdgeKind::kAdjacency, "", cfg.adjacency_weight);
    }
    const int next_off = off + static_cast<int>(sent.tokens.size());
    if (cfg.nextsent && s + 1 < doc.sentences.size())
      g.add_edge(off + sent.root, next_off + doc.sentences[s + 1].root, EdgeKind::kNextSent, "", 1.0);
    off = next_off;
  }
  if (cfg.discourse) insert_discourse_edges(g, doc, diag);
  if (cfg.coref) insert_coref_edges(g, doc);
  return g;
}

namespace detail {

inline std::string dot_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string format_weight(double w) {
  std::ostringstream os;
  os << w;
  return os.str();
}

}  // namespace detail

/// Graphviz dump: nodes labelled surface/POS, edges kind:label:weight.
inline void write_dot(std::ostream &out, const DocumentGraph &g, const std::string &name = "doc") {
  out << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const auto &a = g.node(static_cast<NodeId>(n));
    out << "  n" << n << " [label=\"" << detail::dot_escape(a.surface) << "/" << detail::dot_escape(a.pos) << "\"];\n";
  }
  for (const Edge &e : g.edges()) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << edge_kind_name(e.kind) << ":"
        << detail::dot_escape(e.label) << ":" << detail::format_weight(e.weight) << "\"";
    if (!edge_kind_directed(e.kind)) out << ", dir=none";
    out << "];\n";
  }
  out << "}\n";
}

}  // namespace dsrex

#endif  // DSREX_GRAPH_HPP
