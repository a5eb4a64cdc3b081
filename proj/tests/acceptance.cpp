// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace dsrex;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string acc(double v) { return fmt("%.4f", v); }

// 1 ------------------------------------------------------------------------
Outcome k_shortest_paths_oracle() {
  auto t0 = Clock::now();
  Rng rng(1001);
  int graphs = 0, mismatches = 0;
  std::size_t paths = 0;
  for (; graphs < 300; ++graphs) {
    int n = static_cast<int>(rng.range(2, 10));
    int extra = static_cast<int>(rng.range(0, 20 - (n - 1)));
    DocumentGraph g = testutil::random_graph(rng, n, extra, {1.0, 4.0, 16.0});
    NodeId src = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    NodeId dst = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (dst >= src) ++dst;
    std::size_t k = static_cast<std::size_t>(rng.range(1, 8));
    auto expected = testutil::all_simple_paths(g, src, dst);
    if (expected.size() > k) expected.resize(k);
    auto got = top_k_paths(g, src, dst, k);
    paths += got.size();
    mismatches += got != expected;
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && secs < 60.0;
  o.detail = std::to_string(graphs) + " graphs, " + std::to_string(paths) + " paths, " + std::to_string(mismatches) +
             " mismatches, " + fmt("%.2f s", secs) + " (limit 60 s)";
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome minimal_span_oracle() {
  auto t0 = Clock::now();
  Rng rng(1002);
  int layouts = 0, mismatches = 0;
  std::size_t instances = 0, non_minimal = 0;
  for (; layouts < 2000; ++layouts) {
    Document d = testutil::random_layout(rng, 8, 6);
    auto c = document_candidates(d, CandidateConfig{});
    auto expected = testutil::minimal_span_oracle(c);
    instances += c.size();
    for (std::size_t i = 0; i < c.size(); ++i) {
      mismatches += c[i].minimal_span != expected[i];
      non_minimal += !expected[i];
    }
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && non_minimal > 0 && secs < 30.0;
  o.detail = std::to_string(layouts) + " layouts, " + std::to_string(instances) + " instances (" +
             std::to_string(non_minimal) + " non-minimal), " + std::to_string(mismatches) + " mismatches, " +
             fmt("%.2f s", secs) + " (limit 30 s)";
  return o;
}

// 3 ------------------------------------------------------------------------
Outcome discourse_oracle() {
  Rng rng(1003);
  int cases = 0, mismatches = 0, skipped = 0;
  for (; cases < 500; ++cases) {
    Document d = testutil::random_doc(rng, 12);
    const int n = d.token_count();
    int a1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b1 = static_cast<int>(rng.range(a1, std::min(n - 1, a1 + 3)));
    int a2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b2 = static_cast<int>(rng.range(a2, std::min(n - 1, a2 + 3)));
    d.discourse.push_back({"Cause", {a1, b1}, {a2, b2}});

    auto dist = testutil::restricted_all_pairs(d);
    const int inf = 1 << 20;
    int bu = -1, bv = -1, bc = inf;
    for (int u = a1; u <= b1; ++u)
      for (int v = a2; v <= b2; ++v) {
        int c = u == v ? inf : dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        if (c < bc) {
          bu = u;
          bv = v;
          bc = c;
        }
      }

    GraphConfig cfg;
    Diagnostics diag;
    DocumentGraph g = build_graph(d, cfg, &diag);
    std::vector<Edge> disc;
    for (const Edge &e : g.edges())
      if (e.kind == EdgeKind::kDiscourse) disc.push_back(e);
    if (bu < 0) {
      ++skipped;
      mismatches += !disc.empty() || diag.get("discourse_skipped") != 1;
    } else {
      mismatches += disc.size() != 1 || disc[0].from != bu || disc[0].to != bv || disc[0].weight != 1.0;
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && cases >= 200;
  o.detail = std::to_string(cases) + " documents of <= 12 tokens (" + std::to_string(skipped) +
             " disconnected), " + std::to_string(mismatches) + " mismatches";
  return o;
}

// 4 ------------------------------------------------------------------------
Outcome feature_templates() {
  Outcome o;
  int bad = 0;
  // Per-length instance counts on chain paths.
  for (int L = 2; L <= 8; ++L) {
    DocumentGraph g = testutil::chain(L);
    auto mp = mark_entities(g, testutil::chain_path(g, L), "drug", "gene");
    std::map<std::string, int> got;
    for (const auto &f : ngram_features(mp)) ++got[f.template_id];
    if (got != testutil::instance_oracle(L)) {
      ++bad;
      o.detail += " count mismatch at L=" + std::to_string(L) + ";";
    }
  }
  // Paths from random graphs: whole-path count, distinct templates, hashing.
  Rng rng(1004);
  std::size_t paths = 0, hashed = 0;
  std::uint32_t max_index = 0;
  for (int iter = 0; iter < 200; ++iter) {
    DocumentGraph g = testutil::random_graph(rng, 9, 10, {1.0, 4.0, 16.0});
    for (const Path &p : top_k_paths(g, 0, 8, 5)) {
      ++paths;
      auto mp = mark_entities(g, p, "drug", "gene");
      auto whole = whole_path_features(mp);
      auto ngrams = ngram_features(mp);
      bad += whole.size() != 4;
      std::set<std::string> ids;
      for (const auto &f : ngrams) ids.insert(f.template_id);
      bad += ids.size() > 30 || ((ids.size() == 30) != (p.nodes.size() >= 4));
      for (const auto *fs : {&whole, &ngrams})
        for (const auto &f : *fs) {
          std::uint32_t h = hash_feature(f, 22);
          std::uint64_t ref = testutil::fnv_oracle(f.template_id + "\x1f" + f.payload) & 0x3FFFFFu;
          bad += h != ref || h >= 4194304u;
          max_index = std::max(max_index, h);
          ++hashed;
        }
    }
  }
  o.pass = bad == 0;
  o.detail = "L in [2,8] counts checked, " + std::to_string(paths) + " random paths, " + std::to_string(hashed) +
             " hashed features (max index " + std::to_string(max_index) + " < 4194304), " + std::to_string(bad) +
             " violations" + o.detail;
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome gradient_check() {
  Rng rng(1005);
  int problems = 0;
  double worst_rel = 0.0, worst_opt = 0.0;
  for (; problems < 60; ++problems) {
    const int bits = static_cast<int>(rng.range(2, 5));
    const auto dim = std::uint64_t{1} << bits;
    std::vector<LabeledExample> ex;
    const int n = static_cast<int>(rng.range(2, 20));
    for (int i = 0; i < n; ++i) {
      std::vector<std::uint32_t> idx;
      for (int k = static_cast<int>(rng.range(1, 5)); k > 0; --k) idx.push_back(static_cast<std::uint32_t>(rng.below(dim)));
      ex.push_back({make_feature_vector(idx, bits), i < 2 ? i : static_cast<int>(rng.below(2))});
    }
    const double lambda = 0.1 + 2.0 * rng.uniform();
    Model m = Model::zeros(bits, lambda);
    for (double &w : m.weights) w = 4 * rng.uniform() - 2;
    m.bias = 2 * rng.uniform() - 1;
    auto r = objective_and_gradient(m, ex);
    const double h = 1e-5;
    for (std::size_t j = 0; j <= m.weights.size(); ++j) {
      Model plus = m, minus = m;
      double *pp = j < m.weights.size() ? &plus.weights[j] : &plus.bias;
      double *pm = j < m.weights.size() ? &minus.weights[j] : &minus.bias;
      *pp += h;
      *pm -= h;
      double numeric = (objective_and_gradient(plus, ex).objective - objective_and_gradient(minus, ex).objective) / (2 * h);
      double analytic = j < m.weights.size() ? r.gradient[j] : r.bias_gradient;
      worst_rel = std::max(worst_rel, std::abs(analytic - numeric) /
                                          std::max({1.0, std::abs(analytic), std::abs(numeric)}));
    }
    TrainConfig tc;
    tc.lambda = lambda;
    Model opt = train(ex, tc, bits);
    auto g = objective_and_gradient(opt, ex);
    double norm = std::abs(g.bias_gradient);
    for (double v : g.gradient) norm = std::max(norm, std::abs(v));
    worst_opt = std::max(worst_opt, norm);
  }
  Outcome o;
  o.pass = problems >= 50 && worst_rel <= 1e-4 && worst_opt <= 1e-6;
  o.detail = std::to_string(problems) + " problems, worst relative error " + fmt("%.2e", worst_rel) +
             " (limit 1e-4), worst optimum |grad|_inf " + fmt("%.2e", worst_opt) + " (limit 1e-6)";
  return o;
}

// Shared corpora ------------------------------------------------------------
RunConfig reference_config() {
  RunConfig c;
  c.n_paths = 10;
  c.graph.adjacency_weight = 16.0;
  c.candidates.window_k = 3;
  c.set_seed(7);
  return c;
}

SynthParams clean_params() {
  SynthParams p;
  p.docs = 500;
  p.seed = 1;
  return p;
}

// 6 ------------------------------------------------------------------------
Outcome clean_run() {
  auto t0 = Clock::now();
  SynthCorpus corpus = generate(clean_params());
  RunConfig cfg = reference_config();
  FoldReport real = cross_validate(corpus.docs, corpus.kb, cfg);
  double secs = seconds_since(t0);
  CvOptions shuffled;
  shuffled.shuffle_labels = true;
  FoldReport control = cross_validate(corpus.docs, corpus.kb, cfg, shuffled);
  Outcome o;
  o.pass = real.macro_accuracy >= 0.99 && std::abs(control.macro_accuracy - 0.5) <= 0.05 && secs < 300.0;
  o.detail = std::to_string(corpus.docs.size()) + " docs, K=3 N=10 w=16: macro accuracy " + acc(real.macro_accuracy) +
             " (>= 0.99), shuffled-label control " + acc(control.macro_accuracy) + " (0.50 +- 0.05), " +
             fmt("%.1f s", secs) + " (limit 300 s)";
  return o;
}

// 7 ------------------------------------------------------------------------
Outcome noisy_trends() {
  SynthParams p = clean_params();
  p.label_noise = 0.2;
  p.parse_noise = 0.1;
  SynthCorpus corpus = generate(p);
  SweepTable t = sweep(corpus.docs, corpus.kb, reference_config(), {1, 3, 10}, {1.0, 16.0}, {"all"});
  Outcome o;
  for (int k : {1, 3}) {
    auto n1 = t.at("all", 1, 16.0, k), n10 = t.at("all", 10, 16.0, k);
    auto w1 = t.at("all", 3, 1.0, k), w16 = t.at("all", 3, 16.0, k);
    bool ok = n1 && n10 && w1 && w16 && *n10 >= *n1 + 0.02 && *w16 >= *w1;
    o.pass = o.pass && ok;
    auto show = [](const std::optional<double> &v) { return v ? acc(*v) : std::string("NA"); };
    o.detail += (k == 1 ? "" : "; ") + std::string("K=") + std::to_string(k) + ": N10 " + show(n10) + " vs N1 " +
                show(n1) + " (+0.02), N3 w16 " + show(w16) + " vs w1 " + show(w1);
  }
  return o;
}

// 8 ------------------------------------------------------------------------
Outcome cross_sentence_recall() {
  SynthCorpus corpus = generate(clean_params());
  std::size_t relations[2] = {0, 0};
  int i = 0;
  for (int k : {1, 3}) {
    RunConfig cfg = reference_config();
    cfg.candidates.window_k = k;
    Model m = train_model(corpus.docs, corpus.kb, cfg);
    auto rep = run_extraction(corpus.docs, m, cfg, {0.5}, &corpus.kb);
    relations[i++] = rep.counts[0].relations;
  }
  std::size_t cross_only = 0;
  {
    std::set<std::pair<std::string, std::string>> same, cross;
    for (const auto &t : corpus.truth) {
      if (!t.expressed) continue;
      (t.sent_1 == t.sent_2 ? same : cross).emplace(t.entity_1, t.entity_2);
    }
    for (const auto &c : cross) cross_only += !same.count(c);
  }
  Outcome o;
  o.pass = cross_only > 0 && relations[1] > relations[0];
  o.detail = std::to_string(cross_only) + " cross-sentence-only planted pairs; unique pairs at p >= 0.5: K=3 " +
             std::to_string(relations[1]) + " vs K=1 " + std::to_string(relations[0]);
  return o;
}

// 9 ------------------------------------------------------------------------
struct RunArtifacts {
  std::vector<unsigned char> model;
  std::string fold_report;
  std::string counts;
  std::string relations;
  std::string instances;
};

RunArtifacts full_run() {
  SynthParams p = clean_params();
  p.docs = 150;
  p.label_noise = 0.1;
  p.parse_noise = 0.05;
  SynthCorpus corpus = generate(p);
  RunConfig cfg = reference_config();
  RunArtifacts a;
  a.model = encode_model(train_model(corpus.docs, corpus.kb, cfg));
  std::ostringstream fr, counts, rel, inst;
  write_fold_report(fr, cross_validate(corpus.docs, corpus.kb, cfg));
  Model m = decode_model(a.model);
  auto rep = run_extraction(corpus.docs, m, cfg, {0.5, 0.6, 0.7, 0.8, 0.9}, &corpus.kb);
  write_extraction_counts(counts, rep, cfg.candidates);
  write_relations(rel, rep);
  write_scored_instances(inst, rep);
  a.fold_report = fr.str();
  a.counts = counts.str();
  a.relations = rel.str();
  a.instances = inst.str();
  return a;
}

Outcome determinism() {
  RunArtifacts a = full_run(), b = full_run();
  Outcome o;
  std::vector<std::string> differ;
  if (a.model != b.model) differ.push_back("model");
  if (a.fold_report != b.fold_report) differ.push_back("fold report");
  if (a.counts != b.counts) differ.push_back("extraction counts");
  if (a.relations != b.relations) differ.push_back("relations");
  if (a.instances != b.instances) differ.push_back("scored instances");
  o.pass = differ.empty();
  o.detail = "model " + std::to_string(a.model.size()) + " bytes, fold report, 3 extraction TSVs (" +
             std::to_string(a.instances.size()) + " bytes of instances): ";
  if (differ.empty()) o.detail += "byte-identical";
  for (const auto &d : differ) o.detail += d + " differs; ";
  return o;
}

// 10 -----------------------------------------------------------------------
Outcome minimal_span_ablation() {
  SynthParams p = clean_params();
  p.redundancy = 0.5;
  SynthCorpus corpus = generate(p);
  RunConfig cfg = reference_config();
  cfg.candidates.minimal_only = true;
  FoldReport on = cross_validate(corpus.docs, corpus.kb, cfg);
  cfg.candidates.minimal_only = false;
  FoldReport off = cross_validate(corpus.docs, corpus.kb, cfg);
  Outcome o;
  o.pass = on.macro_accuracy >= off.macro_accuracy + 0.01;
  o.detail = "redundant corpus: minimal_only=true " + acc(on.macro_accuracy) + " vs false " + acc(off.macro_accuracy) +
             " (delta " + fmt("%+.4f", on.macro_accuracy - off.macro_accuracy) + ", need >= 0.01); KB-matching " +
             std::to_string(on.labeling.all.kb_matching) + " -> " + std::to_string(on.labeling.retained.kb_matching);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "k-shortest-paths oracle", k_shortest_paths_oracle},
      {2, "minimal-span oracle", minimal_span_oracle},
      {3, "discourse-edge endpoints", discourse_oracle},
      {4, "feature templates and hashing", feature_templates},
      {5, "gradient check", gradient_check},
      {6, "clean end-to-end run", clean_run},
      {7, "noisy trend reproduction", noisy_trends},
      {8, "cross-sentence recall", cross_sentence_recall},
      {9, "determinism", determinism},
      {10, "minimal-span ablation", minimal_span_ablation},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << "  ("
              << fmt("%.1f s", seconds_since(t0)) << ")" << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
