#ifndef DSREX_FEATURES_HPP
#define DSREX_FEATURES_HPP

// Path features. A path (n_1, e_1, n_2, ..., n_L) with its endpoints
// replaced by typed entity markers yields
//   - 4 whole-path features, one per node representation
//     (lexical, lemma, POS, nothing), and
//   - sliding-window n-grams of 1-5 alternating elements: 9 node-containing
//     shapes x 3 node representations, plus 3 edge-label-only shapes,
//     30 templates in all.
// Feature strings are hashed with FNV-1a 64 into a 2^b binary space.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsrex/candidates.hpp"
#include "dsrex/common.hpp"
#include "dsrex/graph.hpp"
#include "dsrex/paths.hpp"

namespace dsrex {

inline constexpr char kFieldSeparator = '\x1f';
inline constexpr int kMaxNgram = 5;

enum class NodeRep : std::uint8_t { kLexical = 0, kLemma = 1, kPos = 2, kNone = 3 };

inline const char *node_rep_name(NodeRep r) {
  switch (r) {
    case NodeRep::kLexical: return "lex";
    case NodeRep::kLemma: return "lemma";
    case NodeRep::kPos: return "pos";
    case NodeRep::kNone: return "none";
  }
  return "?";
}

inline constexpr std::array<NodeRep, 3> kNgramReps = {NodeRep::kLexical, NodeRep::kLemma, NodeRep::kPos};
inline constexpr std::array<NodeRep, 4> kWholePathReps = {NodeRep::kLexical, NodeRep::kLemma, NodeRep::kPos,
                                                          NodeRep::kNone};

struct FeatureConfig {
  int hash_bits = 22;

  void validate() const {
    if (hash_bits < 1 || hash_bits > 30) throw ValidationError("features.hash_bits must be in [1, 30]");
  }
};

struct FeatureString {
  std::string template_id;
  std::string payload;
  bool operator==(const FeatureString &) const = default;
};

struct FeatureVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  int hash_bits = 22;
  bool operator==(const FeatureVector &) const = default;
};

// One node of a marked path, with every representation pre-rendered.
struct MarkedNode {
  std::string lexical;
  std::string lemma;
  std::string pos;
  bool marker = false;

  const std::string &render(NodeRep rep) const {
    static const std::string empty;
    if (marker) return lexical;
    switch (rep) {
      case NodeRep::kLexical: return lexical;
      case NodeRep::kLemma: return lemma;
      case NodeRep::kPos: return pos;
      case NodeRep::kNone: return empty;
    }
    return empty;
  }
};

struct MarkedPath {
  std::vector<MarkedNode> nodes;
  std::vector<std::string> edges;  // rendered edge labels incl. direction
};

inline std::string escape_field(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), kFieldSeparator, ' ');
  return out;
}

inline std::string entity_marker(int slot, std::string_view type) {
  return "<E" + std::to_string(slot) + ":" + escape_field(type) + ">";
}

/// kind[:label:glyph]; undirected kinds render as the bare kind name.
inline std::string render_edge(const DocumentGraph &g, const Path &p, std::size_t i) {
  const Edge &e = g.edge(p.edges[i]);
  if (!edge_kind_directed(e.kind)) return edge_kind_name(e.kind);
  return std::string(edge_kind_name(e.kind)) + ":" + escape_field(e.label) + ":" + direction_glyph(g, p, i);
}

inline MarkedPath mark_entities(const DocumentGraph &g, const Path &path, std::string_view type_1,
                                std::string_view type_2) {
  if (path.nodes.size() < 2) throw std::invalid_argument("mark_entities: path needs at least two nodes");
  MarkedPath mp;
  mp.nodes.reserve(path.nodes.size());
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (i == 0 || i + 1 == path.nodes.size()) {
      std::string m = entity_marker(i == 0 ? 1 : 2, i == 0 ? type_1 : type_2);
      mp.nodes.push_back({m, m, m, true});
    } else {
      const NodeAttributes &a = g.node(path.nodes[i]);
      mp.nodes.push_back({escape_field(a.surface), escape_field(a.lemma), escape_field(a.pos), false});
    }
  }
  for (std::size_t i = 0; i < path.edges.size(); ++i) mp.edges.push_back(render_edge(g, path, i));
  return mp;
}

namespace detail {

// Element k of the interleaved sequence n_1 e_1 n_2 ... n_L.
inline const std::string &element(const MarkedPath &mp, std::size_t k, NodeRep rep) {
  return (k % 2 == 0) ? mp.nodes[k / 2].render(rep) : mp.edges[k / 2];
}

inline std::string join_elements(const MarkedPath &mp, std::size_t start, std::size_t len, NodeRep rep) {
  std::string out;
  for (std::size_t k = start; k < start + len; ++k) {
    if (k > start) out += kFieldSeparator;
    out += element(mp, k, rep);
  }
  return out;
}

}  // namespace detail

inline std::vector<FeatureString> whole_path_features(const MarkedPath &mp) {
  std::vector<FeatureString> out;
  const std::size_t total = 2 * mp.nodes.size() - 1;
  for (NodeRep rep : kWholePathReps)
    out.push_back({std::string("path.") + node_rep_name(rep), detail::join_elements(mp, 0, total, rep)});
  return out;
}

inline std::string ngram_template_id(bool node_start, std::size_t len, NodeRep rep) {
  return std::string("ngram.") + (node_start ? "n" : "e") + std::to_string(len) + "." + node_rep_name(rep);
}

inline std::string edge_ngram_template_id(std::size_t len) { return "ngram.edges" + std::to_string(len); }

inline std::vector<FeatureString> ngram_features(const MarkedPath &mp) {
  std::vector<FeatureString> out;
  const std::size_t total = 2 * mp.nodes.size() - 1;
  for (std::size_t start = 0; start < total; ++start) {
    const bool node_start = start % 2 == 0;
    // Shapes starting at an edge must contain a node, so they begin at 2.
    for (std::size_t len = node_start ? 1 : 2; len <= kMaxNgram && start + len <= total; ++len) {
      for (NodeRep rep : kNgramReps)
        out.push_back({ngram_template_id(node_start, len, rep), detail::join_elements(mp, start, len, rep)});
    }
  }
  for (std::size_t i = 0; i < mp.edges.size(); ++i) {
    std::string payload;
    for (std::size_t len = 1; len <= 3 && i + len <= mp.edges.size(); ++len) {
      if (len > 1) payload += kFieldSeparator;
      payload += mp.edges[i + len - 1];
      out.push_back({edge_ngram_template_id(len), payload});
    }
  }
  return out;
}

inline std::uint32_t hash_feature(const FeatureString &f, int bits) {
  std::uint64_t h = fnv1a64(f.template_id);
  h = fnv1a64(std::string_view(&kFieldSeparator, 1), h);
  h = fnv1a64(f.payload, h);
  return static_cast<std::uint32_t>(h & ((std::uint64_t{1} << bits) - 1));
}

inline FeatureVector make_feature_vector(std::vector<std::uint32_t> indices, int bits) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return {std::move(indices), bits};
}

inline FeatureVector hash_features(const std::vector<FeatureString> &features, int bits) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("hash_features: bits must be in [1, 30]");
  std::vector<std::uint32_t> idx;
  idx.reserve(features.size());
  for (const FeatureString &f : features) idx.push_back(hash_feature(f, bits));
  return make_feature_vector(std::move(idx), bits);
}

/// Receives (index, feature) pairs when feature dumping is on.
using FeatureSink = std::function<void(std::uint32_t, const FeatureString &)>;

/// Hashed union of whole-path and n-gram features over the top-`n_paths`
/// paths between `src` and `dst`. Returns nullopt when the two nodes are
/// not connected (or coincide); counted as "no_path".
inline std::optional<FeatureVector> featurize_pair(const DocumentGraph &g, NodeId src, NodeId dst,
                                                   std::string_view type_1, std::string_view type_2,
                                                   std::size_t n_paths, const FeatureConfig &fcfg,
                                                   Diagnostics *diag = nullptr, const FeatureSink *sink = nullptr) {
  if (src == dst) {
    if (diag) diag->count("no_path");
    return std::nullopt;
  }
  auto paths = top_k_paths(g, src, dst, n_paths, {}, diag);
  if (paths.empty()) {
    if (diag) diag->count("no_path");
    return std::nullopt;
  }
  std::vector<std::uint32_t> idx;
  for (const Path &p : paths) {
    MarkedPath mp = mark_entities(g, p, type_1, type_2);
    for (auto *family : {&whole_path_features, &ngram_features}) {
      for (const FeatureString &f : (*family)(mp)) {
        std::uint32_t h = hash_feature(f, fcfg.hash_bits);
        idx.push_back(h);
        if (sink) (*sink)(h, f);
      }
    }
  }
  return make_feature_vector(std::move(idx), fcfg.hash_bits);
}

inline std::optional<FeatureVector> featurize_candidate(const DocumentGraph &g, const Document &doc,
                                                        const CandidateInstance &cand, const CandidateConfig &ccfg,
                                                        std::size_t n_paths, const FeatureConfig &fcfg,
                                                        Diagnostics *diag = nullptr,
                                                        const FeatureSink *sink = nullptr) {
  return featurize_pair(g, node_of_mention(doc, cand.mention_1), node_of_mention(doc, cand.mention_2), ccfg.type_1,
                        ccfg.type_2, n_paths, fcfg, diag, sink);
}

}  // namespace dsrex

#endif  // DSREX_FEATURES_HPP
