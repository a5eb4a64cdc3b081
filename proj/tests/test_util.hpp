#ifndef DSREX_TEST_UTIL_HPP
#define DSREX_TEST_UTIL_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dsrex/dsrex.hpp"

namespace testutil {

using namespace dsrex;

// Sentence from "word/POS word/POS ..." with arcs given as (head, dep, label).
inline Sentence sentence(int index, const std::string &words, std::vector<DependencyArc> arcs, int root) {
  Sentence s;
  s.index = index;
  int t = 0;
  for (const auto &w : split(words, ' ')) {
    auto parts = split(w, '/');
    s.tokens.push_back({t++, parts[0], to_lower(parts[0]), parts.size() > 1 ? parts[1] : "NN"});
  }
  s.arcs = std::move(arcs);
  s.root = root;
  return s;
}

inline Mention mention(std::string id, std::string type, int sent, int tok) {
  return {std::move(id), std::move(type), sent, tok, tok, tok};
}

// "D1 inhibits G1 ." with nsubj / dobj arcs.
inline Document simple_doc(const std::string &id = "d0", const std::string &drug = "D1",
                           const std::string &gene = "G1") {
  Document d;
  d.doc_id = id;
  d.sentences.push_back(sentence(0, drug + "/NNP inhibits/VBZ " + gene + "/NNP ./.",
                                 {{1, 0, "nsubj"}, {1, 2, "dobj"}, {1, 3, "punct"}}, 1));
  d.mentions.push_back(mention(drug, "drug", 0, 0));
  d.mentions.push_back(mention(gene, "gene", 0, 2));
  return d;
}

// The two-sentence Dasatinib / Notch passage with its parse.
inline Document dasatinib_doc() {
  Document d;
  d.doc_id = "fig1";
  d.sentences.push_back(sentence(
      0,
      "The/DT p56Lck/NN inhibitor/NN Dasatinib/NNP was/VBD shown/VBN to/TO enhance/VB apoptosis/NN induction/NN in/IN "
      "otherwise/RB GC-resistant/JJ CLL/NN cells/NNS",
      {{2, 0, "det"},
       {2, 1, "nn"},
       {5, 2, "nsubjpass"},
       {2, 3, "abbrev"},
       {5, 4, "auxpass"},
       {5, 7, "xcomp"},
       {9, 8, "nn"},
       {7, 9, "dobj"},
       {12, 11, "advmod"},
       {14, 12, "amod"},
       {14, 13, "nn"},
       {9, 14, "prep_in"}},
      5));
  d.sentences.push_back(sentence(1,
                                 "This/DT shows/VBZ that/IN Notch/NN -mediated/JJ resistance/NN of/IN a/DT mouse/NN "
                                 "lymphoma/NN cell/NN line/NN could/MD be/VB overcome/VBN by/IN inhibiting/VBG "
                                 "p56Lck/NN ./.",
                                 {{1, 0, "det"},
                                  {14, 2, "complm"},
                                  {4, 3, "hyphen"},
                                  {5, 4, "amod"},
                                  {14, 5, "nsubjpass"},
                                  {11, 7, "det"},
                                  {11, 8, "nn"},
                                  {11, 9, "nn"},
                                  {11, 10, "nn"},
                                  {5, 11, "prep_of"},
                                  {14, 12, "aux"},
                                  {14, 13, "auxpass"},
                                  {1, 14, "ccomp"},
                                  {14, 16, "agent"},
                                  {16, 17, "dobj"}},
                                 1));
  d.mentions.push_back(mention("Dasatinib", "drug", 0, 3));
  d.mentions.push_back(mention("Notch", "gene", 1, 3));
  return d;
}

// Random tree parse for a sentence of n tokens: root r, every other token
// attached to a random earlier-visited token.
inline Sentence random_sentence(Rng &rng, int index, int n) {
  std::vector<std::string> words;
  for (int t = 0; t < n; ++t) words.push_back("w" + std::to_string(index) + "_" + std::to_string(t) + "/NN");
  std::string joined;
  for (std::size_t i = 0; i < words.size(); ++i) joined += (i ? " " : "") + words[i];
  const int root = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<int> order;
  for (int t = 0; t < n; ++t)
    if (t != root) order.push_back(t);
  rng.shuffle(order);
  std::vector<int> placed{root};
  std::vector<DependencyArc> arcs;
  for (int t : order) {
    int h = placed[static_cast<std::size_t>(rng.below(placed.size()))];
    arcs.push_back({h, t, rng.bernoulli(0.5) ? "nsubj" : "dobj"});
    placed.push_back(t);
  }
  return sentence(index, joined, std::move(arcs), root);
}

// Random connected multigraph on `n` nodes: a random spanning tree plus
// extra edges (parallel edges allowed), weights drawn from `weights`.
inline DocumentGraph random_graph(Rng &rng, int n, int extra, const std::vector<double> &weights) {
  std::vector<NodeAttributes> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({"n" + std::to_string(i), "n" + std::to_string(i), "NN", 0, i});
  DocumentGraph g(nodes);
  auto w = [&]() { return weights[static_cast<std::size_t>(rng.below(weights.size()))]; };
  int label = 0;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    g.add_edge(j, i, EdgeKind::kDependency, "l" + std::to_string(label++), w());
  }
  for (int k = 0; k < extra; ++k) {
    int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    g.add_edge(a, b, rng.bernoulli(0.5) ? EdgeKind::kDependency : EdgeKind::kAdjacency,
               "l" + std::to_string(label++), w());
  }
  return g;
}

// Every simple path src -> dst by exhaustive DFS, sorted by the ranking order.
inline std::vector<Path> all_simple_paths(const DocumentGraph &g, NodeId src, NodeId dst) {
  std::vector<Path> out;
  Path cur;
  cur.nodes.push_back(src);
  std::vector<char> on(g.node_count(), 0);
  on[static_cast<std::size_t>(src)] = 1;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == dst) {
      Path p = cur;
      p.cost = 0;
      for (int e : p.edges) p.cost += g.edge(e).weight;
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t eid = 0; eid < g.edges().size(); ++eid) {
      const Edge &e = g.edge(static_cast<int>(eid));
      if (e.from != u && e.to != u) continue;
      NodeId v = e.other(u);
      if (on[static_cast<std::size_t>(v)]) continue;
      on[static_cast<std::size_t>(v)] = 1;
      cur.nodes.push_back(v);
      cur.edges.push_back(static_cast<int>(eid));
      dfs(v);
      cur.nodes.pop_back();
      cur.edges.pop_back();
      on[static_cast<std::size_t>(v)] = 0;
    }
  };
  dfs(src);
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

// Minimal-span oracle straight from the definition.
inline std::vector<bool> minimal_span_oracle(const std::vector<CandidateInstance> &c) {
  std::vector<bool> out(c.size(), true);
  auto same = [](const Mention &a, const Mention &b) {
    return a.sentence == b.sentence && a.first == b.first && a.last == b.last;
  };
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (to_lower(c[i].mention_1.entity_id) != to_lower(c[j].mention_1.entity_id)) continue;
      if (to_lower(c[i].mention_2.entity_id) != to_lower(c[j].mention_2.entity_id)) continue;
      bool overlap = same(c[i].mention_1, c[j].mention_1) || same(c[i].mention_2, c[j].mention_2);
      if (overlap && c[j].sent_distance < c[i].sent_distance) out[i] = false;
    }
  return out;
}

// Independent FNV-1a 64 over a byte string.
inline std::uint64_t fnv_oracle(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Unit-weight BFS distance between flat tokens over dependency arcs and
// sentence-root links, by Floyd-Warshall.
inline std::vector<std::vector<int>> restricted_all_pairs(const Document &doc) {
  const int n = doc.token_count();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), inf));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
  auto link = [&](int a, int b) {
    d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    d[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  };
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    int off = doc.sentence_offset(static_cast<int>(s));
    for (const auto &a : doc.sentences[s].arcs) link(off + a.head, off + a.dependent);
    if (s + 1 < doc.sentences.size())
      link(off + doc.sentences[s].root, doc.sentence_offset(static_cast<int>(s + 1)) + doc.sentences[s + 1].root);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto &dij = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        dij = std::min(dij, d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                                d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
      }
  return d;
}

// Random 1-3 sentence document of at most `max_tokens` tokens with tree
// parses; some arcs are dropped so that disconnected spans occur.
inline Document random_doc(Rng &rng, int max_tokens) {
  Document d;
  d.doc_id = "r";
  int total = static_cast<int>(rng.range(2, max_tokens));
  int sents = static_cast<int>(rng.range(1, std::min(3, total)));
  int left = total;
  for (int s = 0; s < sents; ++s) {
    int rest = sents - s - 1;
    int n = s + 1 == sents ? left : static_cast<int>(rng.range(1, left - rest));
    Sentence sent = testutil::random_sentence(rng, s, n);
    std::erase_if(sent.arcs, [&](const DependencyArc &) { return rng.bernoulli(0.15); });
    d.sentences.push_back(std::move(sent));
    left -= n;
  }
  return d;
}

// `sentences` sentences of `tokens` placeholder words, no arcs.
inline Document blank_doc(int sentences, int tokens) {
  Document d;
  d.doc_id = "r";
  std::string words;
  for (int t = 0; t < tokens; ++t) words += (t ? " w" : "w") + std::to_string(t);
  for (int s = 0; s < sentences; ++s) d.sentences.push_back(sentence(s, words, {}, 0));
  return d;
}

// Random single-token drug/gene mentions over a small id pool.
inline Document random_layout(Rng &rng, int max_mentions, int max_sentences) {
  Document d = blank_doc(static_cast<int>(rng.range(1, max_sentences)), 4);
  int n = static_cast<int>(rng.range(1, max_mentions));
  const char *drugs[] = {"dA", "dB", "dC"};
  const char *genes[] = {"gA", "gB"};
  for (int i = 0; i < n; ++i) {
    int s = static_cast<int>(rng.below(d.sentences.size()));
    int t = static_cast<int>(rng.below(4));
    if (rng.bernoulli(0.5))
      d.mentions.push_back(mention(drugs[rng.below(3)], "drug", s, t));
    else
      d.mentions.push_back(mention(genes[rng.below(2)], "gene", s, t));
  }
  return d;
}

// Chain graph n0 - n1 - ... with dependency edges, alternating canonical
// direction, plus an adjacency edge n0 - n{L-1} of weight 16.
inline DocumentGraph chain(int L) {
  std::vector<NodeAttributes> nodes;
  for (int i = 0; i < L; ++i)
    nodes.push_back({"W" + std::to_string(i), "w" + std::to_string(i), "P" + std::to_string(i), 0, i});
  DocumentGraph g(nodes);
  for (int i = 0; i + 1 < L; ++i) {
    if (i % 2 == 0)
      g.add_edge(i, i + 1, EdgeKind::kDependency, "l" + std::to_string(i), 1.0);
    else
      g.add_edge(i + 1, i, EdgeKind::kDependency, "l" + std::to_string(i), 1.0);
  }
  g.add_edge(0, L - 1, EdgeKind::kAdjacency, "", 16.0);
  return g;
}

inline Path chain_path(const DocumentGraph &g, int L) {
  Path p;
  for (int i = 0; i < L; ++i) p.nodes.push_back(i);
  for (int i = 0; i + 1 < L; ++i) p.edges.push_back(i);
  p.cost = path_cost(g, p.edges);
  return p;
}

// Shapes as (starts at node?, element length); the edge-only family is
// counted separately.
struct Shape {
  bool node_start;
  int len;
};

inline std::vector<Shape> node_shapes() {
  std::vector<Shape> s;
  for (int len = 1; len <= 5; ++len) s.push_back({true, len});
  for (int len = 2; len <= 5; ++len) s.push_back({false, len});
  return s;
}

// Instances of every template for a path of L nodes, by sliding each shape
// over the 2L-1 element sequence.
inline std::map<std::string, int> instance_oracle(int L) {
  std::map<std::string, int> count;
  const int total = 2 * L - 1;
  const char *reps[] = {"lex", "lemma", "pos"};
  for (Shape s : node_shapes())
    for (int start = s.node_start ? 0 : 1; start + s.len <= total; start += 2)
      for (const char *r : reps)
        ++count[std::string("ngram.") + (s.node_start ? "n" : "e") + std::to_string(s.len) + "." + r];
  const int edges = L - 1;
  for (int len = 1; len <= 3; ++len)
    for (int i = 0; i + len <= edges; ++i) ++count["ngram.edges" + std::to_string(len)];
  return count;
}

inline std::string temp_dir(const std::string &name) {
  auto p = std::filesystem::temp_directory_path() / ("dsrex_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace testutil

#endif  // DSREX_TEST_UTIL_HPP
