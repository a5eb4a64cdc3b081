#ifndef DSREX_PIPELINE_HPP
#define DSREX_PIPELINE_HPP

// End-to-end runs: labeling, featurization, document-level five-fold
// cross-validation, ablation sweeps, corpus extraction with per-pair
// aggregation, and review sampling.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "dsrex/candidates.hpp"
#include "dsrex/classifier.hpp"
#include "dsrex/common.hpp"
#include "dsrex/config.hpp"
#include "dsrex/corpus.hpp"
#include "dsrex/features.hpp"
#include "dsrex/graph.hpp"
#include "dsrex/paths.hpp"

namespace dsrex {

inline constexpr int kFoldCount = 5;

inline int fold_of(std::string_view doc_id) {
  return static_cast<int>(splitmix64(fnv1a64(doc_id)) % kFoldCount);
}

inline std::map<std::string, int> assign_folds(const std::vector<std::string> &doc_ids) {
  std::map<std::string, int> out;
  for (const auto &id : doc_ids) out[id] = fold_of(id);
  return out;
}

inline std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

inline void write_fingerprint_line(std::ostream &out, std::uint64_t fingerprint) {
  out << "# fingerprint=" << hex64(fingerprint) << '\n';
}

// ---------------------------------------------------------------------------
// Featurization

namespace detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = next++; i < n; i = next++) fn(i, w);
    });
  }
  for (auto &t : pool) t.join();
}

}  // namespace detail

/// Features of selected instances for several path counts at once. Result
/// [k][j] belongs to instances[which[k]] and n_values[j]; nullopt means no
/// path. Top-N paths are a prefix of top-max(N) paths, so one search serves
/// all N.
inline std::vector<std::vector<std::optional<FeatureVector>>> featurize_instances(
    const std::vector<Document> &docs, const std::vector<CandidateInstance> &instances,
    const std::vector<std::size_t> &which, const GraphConfig &gcfg, const CandidateConfig &ccfg,
    const std::vector<std::size_t> &n_values, const FeatureConfig &fcfg, int threads, Diagnostics *diag = nullptr) {
  std::unordered_map<std::string, std::size_t> doc_index;
  for (std::size_t d = 0; d < docs.size(); ++d) doc_index.emplace(docs[d].doc_id, d);
  std::map<std::size_t, std::vector<std::size_t>> by_doc;  // doc -> positions in `which`
  for (std::size_t k = 0; k < which.size(); ++k) {
    auto it = doc_index.find(instances[which[k]].doc_id);
    if (it == doc_index.end()) throw DataError("instance refers to unknown document " + instances[which[k]].doc_id);
    by_doc[it->second].push_back(k);
  }
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups(by_doc.begin(), by_doc.end());
  const std::size_t max_n = *std::max_element(n_values.begin(), n_values.end());

  std::vector<std::vector<std::optional<FeatureVector>>> out(which.size());
  std::vector<Diagnostics> local(static_cast<std::size_t>(std::max(threads, 1)));
  detail::parallel_for(groups.size(), threads, [&](std::size_t gi, std::size_t worker) {
    Diagnostics &dg = local[worker];
    const Document &doc = docs[groups[gi].first];
    DocumentGraph g = build_graph(doc, gcfg, &dg);
    for (std::size_t k : groups[gi].second) {
      const CandidateInstance &c = instances[which[k]];
      out[k].assign(n_values.size(), std::nullopt);
      NodeId src = node_of_mention(doc, c.mention_1), dst = node_of_mention(doc, c.mention_2);
      std::vector<Path> paths;
      if (src != dst) paths = top_k_paths(g, src, dst, max_n, {}, &dg);
      if (paths.empty()) {
        dg.count("no_path");
        continue;
      }
      std::vector<std::vector<std::uint32_t>> per_path;
      for (const Path &p : paths) {
        MarkedPath mp = mark_entities(g, p, ccfg.type_1, ccfg.type_2);
        std::vector<std::uint32_t> idx;
        for (const auto &f : whole_path_features(mp)) idx.push_back(hash_feature(f, fcfg.hash_bits));
        for (const auto &f : ngram_features(mp)) idx.push_back(hash_feature(f, fcfg.hash_bits));
        per_path.push_back(std::move(idx));
      }
      for (std::size_t j = 0; j < n_values.size(); ++j) {
        std::vector<std::uint32_t> idx;
        for (std::size_t p = 0; p < std::min(n_values[j], per_path.size()); ++p)
          idx.insert(idx.end(), per_path[p].begin(), per_path[p].end());
        out[k][j] = make_feature_vector(std::move(idx), fcfg.hash_bits);
      }
    }
  });
  if (diag)
    for (const auto &d : local) diag->merge(d);
  return out;
}

/// All candidates of the corpus (enumerated + minimal-span marked) in
/// document order.
inline std::vector<CandidateInstance> corpus_candidates(const std::vector<Document> &docs, const CandidateConfig &cfg) {
  std::vector<CandidateInstance> out;
  for (const Document &d : docs) {
    auto c = document_candidates(d, cfg);
    out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  return out;
}

inline LabeledSet label_corpus(const std::vector<Document> &docs, const KnowledgeBase &kb, const CandidateConfig &cfg) {
  return label_candidates(corpus_candidates(docs, cfg), kb, cfg);
}

inline std::vector<std::size_t> labeled_positions(const std::vector<CandidateInstance> &instances) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].label != Label::kUnlabeled) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Cross-validation

struct FoldResult {
  int fold = 0;
  std::size_t train_examples = 0;
  std::size_t test_examples = 0;
  double accuracy = 0.0;
  bool skipped = false;
};

struct FoldReport {
  std::vector<FoldResult> folds;
  double macro_accuracy = 0.0;
  std::size_t usable_folds = 0;
  std::uint64_t fingerprint = 0;
  LabelingStats labeling;
  Diagnostics diag;

  bool operator==(const FoldReport &o) const {
    if (folds.size() != o.folds.size() || macro_accuracy != o.macro_accuracy) return false;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      const auto &a = folds[i], &b = o.folds[i];
      if (a.fold != b.fold || a.train_examples != b.train_examples || a.test_examples != b.test_examples ||
          a.accuracy != b.accuracy || a.skipped != b.skipped)
        return false;
    }
    return true;
  }
};

struct CvOptions {
  bool shuffle_labels = false;  // chance-level control
  int threads = 1;
};

/// Five-fold CV over ready examples; `folds[i]` is example i's fold.
inline FoldReport cross_validate_examples(const std::vector<LabeledExample> &examples, const std::vector<int> &folds,
                                          const TrainConfig &tcfg, int hash_bits) {
  FoldReport report;
  double sum = 0.0;
  for (int f = 0; f < kFoldCount; ++f) {
    FoldResult fr;
    fr.fold = f;
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < examples.size(); ++i) (folds[i] == f ? test_idx : train_idx).push_back(i);
    fr.train_examples = train_idx.size();
    fr.test_examples = test_idx.size();
    if (test_idx.empty()) {
      fr.skipped = true;
      report.diag.warn("fold " + std::to_string(f) + " has no test examples; skipped");
      report.folds.push_back(fr);
      continue;
    }
    Model model;
    try {
      model = train(examples, train_idx, tcfg, hash_bits);
    } catch (const DataError &e) {
      fr.skipped = true;
      report.diag.warn("fold " + std::to_string(f) + ": " + e.what() + "; skipped");
      report.folds.push_back(fr);
      continue;
    }
    if (model.meta.grad_inf_norm > tcfg.grad_tolerance) report.diag.count("train_not_converged");
    std::size_t correct = 0;
    for (std::size_t i : test_idx) {
      int pred = predict(model, examples[i].x) >= 0.5 ? 1 : 0;
      correct += pred == examples[i].y;
    }
    fr.accuracy = static_cast<double>(correct) / static_cast<double>(test_idx.size());
    sum += fr.accuracy;
    ++report.usable_folds;
    report.folds.push_back(fr);
  }
  if (report.usable_folds < 2) throw DataError("cross-validation needs at least 2 usable folds");
  report.macro_accuracy = sum / static_cast<double>(report.usable_folds);
  return report;
}

namespace detail {

// Turns featurized labeled instances into examples + fold ids, dropping
// instances without a path.
inline void collect_examples(const std::vector<CandidateInstance> &instances, const std::vector<std::size_t> &which,
                             const std::vector<std::vector<std::optional<FeatureVector>>> &feats, std::size_t column,
                             std::vector<LabeledExample> &examples, std::vector<int> &folds) {
  examples.clear();
  folds.clear();
  for (std::size_t k = 0; k < which.size(); ++k) {
    const auto &fv = feats[k][column];
    if (!fv) continue;
    const CandidateInstance &c = instances[which[k]];
    examples.push_back({*fv, c.label == Label::kPositive ? 1 : 0});
    folds.push_back(fold_of(c.doc_id));
  }
}

inline void shuffle_labels(std::vector<LabeledExample> &examples, std::uint64_t seed) {
  std::vector<int> ys;
  for (const auto &e : examples) ys.push_back(e.y);
  Rng rng(splitmix64(seed ^ 0x5eed5eedULL));
  rng.shuffle(ys);
  for (std::size_t i = 0; i < examples.size(); ++i) examples[i].y = ys[i];
}

}  // namespace detail

inline FoldReport cross_validate(const std::vector<Document> &docs, const KnowledgeBase &kb, const RunConfig &cfg,
                                 const CvOptions &opts = {}) {
  cfg.validate();
  Diagnostics diag;
  LabeledSet set = label_corpus(docs, kb, cfg.candidates);
  auto which = labeled_positions(set.instances);
  auto feats = featurize_instances(docs, set.instances, which, cfg.graph, cfg.candidates, {cfg.n_paths},
                                   cfg.features, opts.threads, &diag);
  std::vector<LabeledExample> examples;
  std::vector<int> folds;
  detail::collect_examples(set.instances, which, feats, 0, examples, folds);
  if (opts.shuffle_labels) detail::shuffle_labels(examples, cfg.seed);
  FoldReport report = cross_validate_examples(examples, folds, cfg.train, cfg.features.hash_bits);
  report.fingerprint = cfg.fingerprint();
  report.labeling = set.stats;
  report.diag.merge(diag);
  return report;
}

inline void write_fold_report(std::ostream &out, const FoldReport &r) {
  write_fingerprint_line(out, r.fingerprint);
  out << "fold\ttrain_examples\ttest_examples\taccuracy\n";
  for (const auto &f : r.folds) {
    out << f.fold << '\t' << f.train_examples << '\t' << f.test_examples << '\t'
        << (f.skipped ? std::string("NA") : format_prob(f.accuracy)) << '\n';
  }
  out << "macro\t\t\t" << format_prob(r.macro_accuracy) << '\n';
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  std::string edges;
  std::size_t n_paths = 0;
  double adjacency_weight = 0.0;
  std::vector<std::optional<double>> accuracy;  // one per window size
};

struct SweepTable {
  std::vector<int> window_sizes;
  std::vector<SweepRow> rows;
  std::uint64_t fingerprint = 0;
  Diagnostics diag;

  std::optional<double> at(const std::string &edges, std::size_t n, double w, int k) const {
    auto kit = std::find(window_sizes.begin(), window_sizes.end(), k);
    if (kit == window_sizes.end()) return std::nullopt;
    for (const auto &r : rows)
      if (r.edges == edges && r.n_paths == n && r.adjacency_weight == w)
        return r.accuracy[static_cast<std::size_t>(kit - window_sizes.begin())];
    return std::nullopt;
  }
};

struct SweepOptions {
  std::vector<int> window_sizes = {1, 3};
  int threads = 1;
};

/// One cross-validation per (edge toggle, N, adjacency weight, K). Failed
/// cells are left empty (NA).
inline SweepTable sweep(const std::vector<Document> &docs, const KnowledgeBase &kb, const RunConfig &base,
                        std::vector<std::size_t> n_values, const std::vector<double> &adj_weights,
                        const std::vector<std::string> &edge_toggles, const SweepOptions &opts = {}) {
  base.validate();
  SweepTable table;
  table.window_sizes = opts.window_sizes;
  table.fingerprint = base.fingerprint();
  for (const auto &toggle : edge_toggles)
    for (std::size_t n : n_values)
      for (double w : adj_weights)
        table.rows.push_back({toggle, n, w, std::vector<std::optional<double>>(opts.window_sizes.size())});

  for (std::size_t ki = 0; ki < opts.window_sizes.size(); ++ki) {
    RunConfig cfg = base;
    cfg.candidates.window_k = opts.window_sizes[ki];
    LabeledSet set;
    try {
      set = label_corpus(docs, kb, cfg.candidates);
    } catch (const DataError &e) {
      table.diag.warn("K=" + std::to_string(cfg.candidates.window_k) + ": " + e.what());
      continue;
    }
    auto which = labeled_positions(set.instances);
    for (const auto &toggle : edge_toggles) {
      for (double w : adj_weights) {
        GraphConfig g = parse_edge_toggle(toggle, base.graph);
        g.adjacency_weight = w;
        auto feats = featurize_instances(docs, set.instances, which, g, cfg.candidates, n_values, cfg.features,
                                         opts.threads, &table.diag);
        for (std::size_t j = 0; j < n_values.size(); ++j) {
          std::vector<LabeledExample> examples;
          std::vector<int> folds;
          detail::collect_examples(set.instances, which, feats, j, examples, folds);
          std::optional<double> acc;
          try {
            acc = cross_validate_examples(examples, folds, cfg.train, cfg.features.hash_bits).macro_accuracy;
          } catch (const DataError &e) {
            table.diag.warn(e.what());
          }
          for (auto &row : table.rows)
            if (row.edges == toggle && row.n_paths == n_values[j] && row.adjacency_weight == w)
              row.accuracy[ki] = acc;
        }
      }
    }
  }
  return table;
}

inline void write_sweep_table(std::ostream &out, const SweepTable &t) {
  write_fingerprint_line(out, t.fingerprint);
  out << "edges\tn_paths\tadjacency_weight";
  for (int k : t.window_sizes) out << "\tK=" << k;
  out << '\n';
  for (const auto &r : t.rows) {
    out << r.edges << '\t' << r.n_paths << '\t' << format_double(r.adjacency_weight);
    for (const auto &a : r.accuracy) out << '\t' << (a ? format_prob(*a) : std::string("NA"));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Training a deployable model

/// Labels the corpus and trains on every labeled instance. The model carries
/// the featurization fingerprint of `cfg`.
inline Model train_model(const std::vector<Document> &docs, const KnowledgeBase &kb, const RunConfig &cfg,
                         int threads = 1, Diagnostics *diag = nullptr) {
  cfg.validate();
  LabeledSet set = label_corpus(docs, kb, cfg.candidates);
  auto which = labeled_positions(set.instances);
  auto feats =
      featurize_instances(docs, set.instances, which, cfg.graph, cfg.candidates, {cfg.n_paths}, cfg.features, threads, diag);
  std::vector<LabeledExample> examples;
  std::vector<int> folds;
  detail::collect_examples(set.instances, which, feats, 0, examples, folds);
  Model m = train(examples, cfg.train, cfg.features.hash_bits);
  m.meta.fingerprint = cfg.feature_fingerprint();
  return m;
}

// ---------------------------------------------------------------------------
// Extraction

struct ScoredInstance {
  CandidateInstance candidate;
  double probability = 0.0;
  bool has_path = true;
  bool in_kb = false;
};

struct RelationExtraction {
  std::string entity_id_1;
  std::string entity_id_2;
  double probability = 0.0;  // max over supporting instances
  bool in_kb = false;
  std::vector<std::size_t> support;  // indices into ExtractionReport::instances
};

struct ThresholdCounts {
  double threshold = 0.0;
  std::size_t candidates = 0;  // instances with p >= threshold
  std::size_t relations = 0;   // unique pairs with max p >= threshold
  std::size_t entities_1 = 0;  // unique slot-1 entities among those relations
  std::size_t entities_2 = 0;
  std::size_t candidates_not_in_kb = 0;
  std::size_t relations_not_in_kb = 0;
};

struct ExtractionReport {
  std::vector<ScoredInstance> instances;
  std::vector<RelationExtraction> relations;  // sorted by (id1, id2)
  std::vector<ThresholdCounts> counts;
  std::size_t no_path = 0;
  std::uint64_t fingerprint = 0;
};

/// Scores every minimal-span candidate, groups by entity pair and takes the
/// max instance probability per pair. Instances without a path score 0.
inline ExtractionReport run_extraction(const std::vector<Document> &docs, const Model &model, const RunConfig &cfg,
                                       const std::vector<double> &thresholds, const KnowledgeBase *kb = nullptr,
                                       int threads = 1) {
  cfg.validate();
  if (model.meta.fingerprint != cfg.feature_fingerprint())
    throw DataError("model fingerprint " + hex64(model.meta.fingerprint) + " does not match run config fingerprint " +
                    hex64(cfg.feature_fingerprint()) + "; refusing to extract");
  if (model.hash_bits != cfg.features.hash_bits) throw DataError("model hash_bits differ from config");

  ExtractionReport report;
  report.fingerprint = cfg.fingerprint();
  auto all = corpus_candidates(docs, cfg.candidates);
  std::erase_if(all, [](const CandidateInstance &c) { return !c.minimal_span; });
  std::vector<std::size_t> which(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) which[i] = i;
  Diagnostics diag;
  auto feats =
      featurize_instances(docs, all, which, cfg.graph, cfg.candidates, {cfg.n_paths}, cfg.features, threads, &diag);

  std::map<std::pair<std::string, std::string>, std::size_t> rel_index;
  for (std::size_t i = 0; i < all.size(); ++i) {
    ScoredInstance s;
    s.candidate = std::move(all[i]);
    s.has_path = feats[i][0].has_value();
    s.probability = s.has_path ? predict(model, *feats[i][0]) : 0.0;
    report.no_path += !s.has_path;
    auto key = detail::pair_key(s.candidate);
    s.in_kb = kb && kb->pairs.count(key);
    rel_index.emplace(key, 0);
    report.instances.push_back(std::move(s));
  }
  std::size_t r = 0;
  for (auto &[key, idx] : rel_index) {
    idx = r++;
    report.relations.push_back({key.first, key.second, 0.0, kb && kb->pairs.count(key), {}});
  }
  for (std::size_t i = 0; i < report.instances.size(); ++i) {
    const auto &s = report.instances[i];
    auto &rel = report.relations[rel_index.at(detail::pair_key(s.candidate))];
    rel.support.push_back(i);
    rel.probability = std::max(rel.probability, s.probability);
  }
  for (double t : thresholds) {
    ThresholdCounts c;
    c.threshold = t;
    for (const auto &s : report.instances) {
      if (s.probability < t) continue;
      ++c.candidates;
      c.candidates_not_in_kb += !s.in_kb;
    }
    std::set<std::string> e1, e2;
    for (const auto &rel : report.relations) {
      if (rel.probability < t) continue;
      ++c.relations;
      c.relations_not_in_kb += !rel.in_kb;
      e1.insert(rel.entity_id_1);
      e2.insert(rel.entity_id_2);
    }
    c.entities_1 = e1.size();
    c.entities_2 = e2.size();
    report.counts.push_back(c);
  }
  return report;
}

inline void write_extraction_counts(std::ostream &out, const ExtractionReport &r, const CandidateConfig &ccfg) {
  write_fingerprint_line(out, r.fingerprint);
  out << "threshold\tcandidates\trelations\tunique_" << ccfg.type_1 << "\tunique_" << ccfg.type_2
      << "\tcandidates_not_in_kb\trelations_not_in_kb\n";
  for (const auto &c : r.counts) {
    out << format_prob(c.threshold) << '\t' << c.candidates << '\t' << c.relations << '\t' << c.entities_1 << '\t'
        << c.entities_2 << '\t' << c.candidates_not_in_kb << '\t' << c.relations_not_in_kb << '\n';
  }
}

inline void write_relations(std::ostream &out, const ExtractionReport &r) {
  write_fingerprint_line(out, r.fingerprint);
  out << "entity_id_1\tentity_id_2\tprobability\tin_kb\tsupport\n";
  for (const auto &rel : r.relations) {
    out << rel.entity_id_1 << '\t' << rel.entity_id_2 << '\t' << format_prob(rel.probability) << '\t'
        << (rel.in_kb ? 1 : 0) << '\t';
    for (std::size_t k = 0; k < rel.support.size(); ++k) {
      const auto &s = r.instances[rel.support[k]];
      if (k) out << ';';
      out << s.candidate.doc_id << ':' << s.candidate.mention_1.sentence << ',' << s.candidate.mention_2.sentence << ':'
          << format_prob(s.probability);
    }
    out << '\n';
  }
}

inline void write_scored_instances(std::ostream &out, const ExtractionReport &r) {
  write_fingerprint_line(out, r.fingerprint);
  out << "doc_id\tentity_id_1\tentity_id_2\tsent_1\tsent_2\tspan_1\tspan_2\tdistance\thas_path\tin_kb\tprobability\n";
  for (const auto &s : r.instances) {
    const auto &c = s.candidate;
    out << c.doc_id << '\t' << c.mention_1.entity_id << '\t' << c.mention_2.entity_id << '\t' << c.mention_1.sentence
        << '\t' << c.mention_2.sentence << '\t' << c.mention_1.first << '-' << c.mention_1.last << '\t'
        << c.mention_2.first << '-' << c.mention_2.last << '\t' << c.sent_distance << '\t' << s.has_path << '\t'
        << s.in_kb << '\t' << format_prob(s.probability) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Review sampling

struct ReviewStratum {
  double threshold = 0.0;
  std::size_t count = 0;
};

struct ReviewRow {
  std::size_t stratum = 0;
  const ScoredInstance *instance = nullptr;
};

/// Independent seeded sample per stratum from instances with
/// p >= threshold. A stratum larger than its population takes all of it.
inline std::vector<ReviewRow> sample_for_review(const std::vector<ScoredInstance> &instances,
                                                const std::vector<ReviewStratum> &strata, std::uint64_t seed,
                                                Diagnostics *diag = nullptr) {
  std::vector<ReviewRow> rows;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    std::vector<std::size_t> population;
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (instances[i].probability >= strata[s].threshold) population.push_back(i);
    if (strata[s].count > population.size() && diag) {
      diag->warn("stratum p>=" + format_prob(strata[s].threshold) + " wants " + std::to_string(strata[s].count) +
                 " rows but only " + std::to_string(population.size()) + " qualify; taking all");
    }
    Rng rng(splitmix64(seed + s));
    auto picked = rng.sample_indices(population.size(), strata[s].count);
    std::sort(picked.begin(), picked.end());
    for (std::size_t k : picked) rows.push_back({s, &instances[population[k]]});
  }
  return rows;
}

inline void write_review_sample(std::ostream &out, const std::vector<ReviewRow> &rows,
                                const std::vector<ReviewStratum> &strata, std::uint64_t fingerprint) {
  write_fingerprint_line(out, fingerprint);
  out << "stratum_threshold\tdoc_id\tentity_id_1\tentity_id_2\tsent_1\tspan_1\tsent_2\tspan_2\tprobability\tjudgement\n";
  for (const auto &r : rows) {
    const auto &c = r.instance->candidate;
    out << format_prob(strata[r.stratum].threshold) << '\t' << c.doc_id << '\t' << c.mention_1.entity_id << '\t'
        << c.mention_2.entity_id << '\t' << c.mention_1.sentence << '\t' << c.mention_1.first << '-' << c.mention_1.last
        << '\t' << c.mention_2.sentence << '\t' << c.mention_2.first << '-' << c.mention_2.last << '\t'
        << format_prob(r.instance->probability) << "\t\n";
  }
}

}  // namespace dsrex

#endif  // DSREX_PIPELINE_HPP
