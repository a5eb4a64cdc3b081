#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "test_util.hpp"

using namespace dsrex;
using testutil::mention;
using testutil::sentence;

namespace {

std::vector<Edge> sorted_edges(const DocumentGraph &g) {
  auto out = g.edges();
  std::sort(out.begin(), out.end(), [](const Edge &a, const Edge &b) {
    return std::tie(a.from, a.to, a.kind, a.label) < std::tie(b.from, b.to, b.kind, b.label);
  });
  return out;
}

}  // namespace

TEST(BuildGraph, SingleSentenceCounts) {
  Document d;
  d.doc_id = "x";
  d.sentences.push_back(sentence(0, "a b c", {{1, 0, "nsubj"}, {1, 2, "dobj"}}, 1));
  DocumentGraph g = build_graph(d, GraphConfig{});
  EXPECT_EQ(g.count(EdgeKind::kDependency), 2u);
  EXPECT_EQ(g.count(EdgeKind::kAdjacency), 2u);
  EXPECT_EQ(g.count(EdgeKind::kNextSent), 0u);
}

TEST(BuildGraph, DasatinibPassageHasSingleNextSentBetweenRoots) {
  Document d = testutil::dasatinib_doc();
  ASSERT_NO_THROW(validate_document(d));
  DocumentGraph g = build_graph(d, GraphConfig{});
  ASSERT_EQ(g.count(EdgeKind::kNextSent), 1u);
  for (const Edge &e : g.edges()) {
    if (e.kind != EdgeKind::kNextSent) continue;
    EXPECT_EQ(g.node(e.from).surface, "shown");
    EXPECT_EQ(g.node(e.to).surface, "shows");
  }
  EXPECT_EQ(g.node(node_of_mention(d, d.mentions[0])).surface, "Dasatinib");
  EXPECT_EQ(g.node(node_of_mention(d, d.mentions[1])).surface, "Notch");
  EXPECT_EQ(node_of_mention(d, d.mentions[1]), 18);
}

TEST(BuildGraph, AdjacencyOnlyWhenDependencyDisabled) {
  Document d = testutil::simple_doc();
  GraphConfig cfg;
  cfg.dependency = false;
  cfg.nextsent = false;
  DocumentGraph g = build_graph(d, cfg);
  EXPECT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(g.count(EdgeKind::kAdjacency), 3u);
}

TEST(BuildGraph, EdgeCountAndWeightInvariants) {
  Rng rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    Document d = testutil::random_doc(rng, 20);
    GraphConfig cfg;
    cfg.adjacency_weight = iter % 2 ? 1.0 : 16.0;
    DocumentGraph g = build_graph(d, cfg);
    std::size_t adj = 0, arcs = 0;
    for (const auto &s : d.sentences) {
      adj += s.tokens.size() - 1;
      arcs += s.arcs.size();
    }
    EXPECT_EQ(g.count(EdgeKind::kAdjacency), adj);
    EXPECT_EQ(g.count(EdgeKind::kDependency), arcs);
    EXPECT_EQ(g.count(EdgeKind::kNextSent), d.sentences.size() - 1);
    for (const Edge &e : g.edges())
      EXPECT_EQ(e.weight, e.kind == EdgeKind::kAdjacency ? cfg.adjacency_weight : 1.0);
  }
}

TEST(BuildGraph, DisablingKindRemovesExactlyThatKind) {
  Document d = testutil::dasatinib_doc();
  d.coref.push_back({{1, 3}, {0, 3}});
  d.discourse.push_back({"Cause", {0, 14}, {15, 33}});
  DocumentGraph full = build_graph(d, GraphConfig{});
  for (int k = 0; k < kEdgeKindCount; ++k) {
    auto kind = static_cast<EdgeKind>(k);
    GraphConfig cfg;
    switch (kind) {
      case EdgeKind::kDependency: cfg.dependency = false; break;
      case EdgeKind::kAdjacency: cfg.adjacency = false; break;
      case EdgeKind::kNextSent: cfg.nextsent = false; break;
      case EdgeKind::kDiscourse: cfg.discourse = false; break;
      case EdgeKind::kCoref: cfg.coref = false; break;
    }
    DocumentGraph part = build_graph(d, cfg);
    std::vector<Edge> expected;
    for (const Edge &e : sorted_edges(full))
      if (e.kind != kind) expected.push_back(e);
    EXPECT_EQ(sorted_edges(part), expected) << edge_kind_name(kind);
  }
}

TEST(Discourse, AdjacentTokensJoinedByArc) {
  Document d;
  d.doc_id = "x";
  d.sentences.push_back(sentence(0, "a b c d", {{1, 0, "x"}, {1, 2, "x"}, {2, 3, "x"}}, 1));
  d.discourse.push_back({"Contrast", {2, 2}, {3, 3}});
  DocumentGraph g = build_graph(d, GraphConfig{});
  ASSERT_EQ(g.count(EdgeKind::kDiscourse), 1u);
  const Edge &e = g.edges().back();
  EXPECT_EQ(e.from, 2);
  EXPECT_EQ(e.to, 3);
  EXPECT_EQ(e.label, "Contrast");
  EXPECT_EQ(e.weight, 1.0);
}

TEST(Discourse, DisconnectedSpansAreSkipped) {
  Document d;
  d.doc_id = "x";
  d.sentences.push_back(sentence(0, "a b", {}, 0));
  d.sentences.push_back(sentence(1, "c d", {}, 1));
  d.discourse.push_back({"Cause", {1, 1}, {2, 2}});
  Diagnostics diag;
  DocumentGraph g = build_graph(d, GraphConfig{}, &diag);
  EXPECT_EQ(g.count(EdgeKind::kDiscourse), 0u);
  EXPECT_EQ(diag.get("discourse_skipped"), 1u);
}

TEST(Discourse, EndpointsMatchAllPairsOracle) {
  Rng rng(5);
  int checked = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Document d = testutil::random_doc(rng, 12);
    const int n = d.token_count();
    int a1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b1 = static_cast<int>(rng.range(a1, n - 1));
    int a2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b2 = static_cast<int>(rng.range(a2, n - 1));
    DiscourseRelation rel{"Elaboration", {a1, b1}, {a2, b2}};
    auto dist = testutil::restricted_all_pairs(d);
    int bu = -1, bv = -1, bc = 1 << 20;
    for (int u = a1; u <= b1; ++u)
      for (int v = a2; v <= b2; ++v) {
        if (u == v) continue;
        int c = dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        if (c < bc || (c == bc && std::pair(u, v) < std::pair(bu, bv))) {
          bu = u;
          bv = v;
          bc = c;
        }
      }
    if (bc >= (1 << 20)) bu = -1;
    auto ep = discourse_endpoints(rel, detail::restricted_adjacency(d));
    EXPECT_EQ(ep.u, bu);
    if (bu >= 0) {
      EXPECT_EQ(ep.v, bv);
      EXPECT_EQ(ep.cost, bc);
    }
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(Coref, OneEdgePerLinkWithDedup) {
  Document d = testutil::simple_doc();
  d.sentences.push_back(sentence(1, "It/PRP works/VBZ", {{1, 0, "nsubj"}}, 1));
  d.coref.push_back({{1, 0}, {0, 2}});
  DocumentGraph g = build_graph(d, GraphConfig{});
  EXPECT_EQ(g.count(EdgeKind::kCoref), 1u);
  d.coref.push_back({{1, 0}, {0, 2}});
  g = build_graph(d, GraphConfig{});
  EXPECT_EQ(g.count(EdgeKind::kCoref), 1u);
  d.coref.push_back({{0, 3}, {0, 0}});  // same sentence
  g = build_graph(d, GraphConfig{});
  EXPECT_EQ(g.count(EdgeKind::kCoref), 2u);
  const Edge &e = g.edges().back();
  EXPECT_EQ(e.from, 3);
  EXPECT_EQ(e.to, 0);
}

TEST(NodeOfMention, FlatOffsets) {
  Document d = testutil::dasatinib_doc();
  Mention m{"x", "gene", 1, 2, 4, 4};
  EXPECT_EQ(node_of_mention(d, m), 19);
  Mention span{"y", "drug", 0, 2, 4, 3};
  EXPECT_EQ(node_of_mention(d, span), 3);
  EXPECT_EQ(node_of_mention(d, mention("z", "drug", 0, 7)), 7);
}

TEST(BuildGraph, ParallelEdgesOfDifferentKindsKept) {
  Document d = testutil::simple_doc();
  DocumentGraph g = build_graph(d, GraphConfig{});
  int between_0_1 = 0;
  for (const Edge &e : g.edges())
    if ((e.from == 0 && e.to == 1) || (e.from == 1 && e.to == 0)) ++between_0_1;
  EXPECT_EQ(between_0_1, 2);
}

TEST(WriteDot, ListsNodesAndEdges) {
  DocumentGraph g = build_graph(testutil::simple_doc(), GraphConfig{});
  std::ostringstream os;
  write_dot(os, g);
  std::string s = os.str();
  EXPECT_NE(s.find("inhibits/VBZ"), std::string::npos);
  EXPECT_NE(s.find("adj::16"), std::string::npos);
  EXPECT_NE(s.find("dep:nsubj:1"), std::string::npos);
}
