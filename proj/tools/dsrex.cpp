// dsrex: command-line front end for the relation-extraction pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsrex/dsrex.hpp"

namespace fs = std::filesystem;
using namespace dsrex;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = ".";
};

struct Inputs {
  std::string corpus;
  std::string kb;
  std::string model;
};

RunConfig load_config(const Globals &g) {
  RunConfig cfg;
  if (!g.config.empty()) cfg = RunConfig::from_toml(TomlTable::parse_file(g.config));
  if (g.seed) cfg.set_seed(*g.seed);
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const Globals &g, const std::string &name) {
  fs::create_directories(g.out);
  fs::path p = fs::path(g.out) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write " + p.string());
  return f;
}

void note(const std::string &what) { std::cerr << "dsrex: " << what << '\n'; }

void report_diagnostics(const Diagnostics &d) {
  for (const auto &[k, v] : d.counters) note(k + "=" + std::to_string(v));
  for (const auto &w : d.warnings) note("warning: " + w);
}

std::vector<double> parse_thresholds(const std::vector<double> &given) {
  if (!given.empty()) return given;
  return {0.5, 0.6, 0.7, 0.8, 0.9};
}

// Writes `index<TAB>template_id<TAB>payload` for every feature of every
// minimal-span candidate, preceded by a comment naming the candidate.
void dump_features(const std::vector<Document> &docs, const RunConfig &cfg, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_fingerprint_line(out, cfg.feature_fingerprint());
  out << "index\ttemplate_id\tpayload\n";
  FeatureSink sink = [&](std::uint32_t idx, const FeatureString &f) {
    std::string payload = f.payload;
    for (char &c : payload)
      if (c == '\x1f') c = ' ';
    out << idx << '\t' << f.template_id << '\t' << payload << '\n';
  };
  for (const Document &d : docs) {
    DocumentGraph g = build_graph(d, cfg.graph);
    for (const auto &c : document_candidates(d, cfg.candidates)) {
      if (cfg.candidates.minimal_only && !c.minimal_span) continue;
      out << "# " << c.doc_id << '\t' << c.mention_1.entity_id << '\t' << c.mention_2.entity_id << '\t'
          << c.mention_1.sentence << '\t' << c.mention_2.sentence << '\n';
      featurize_candidate(g, d, c, cfg.candidates, cfg.n_paths, cfg.features, nullptr, &sink);
    }
  }
}

// Subcommands ----------------------------------------------------------------

int cmd_validate(const Globals &g, const Inputs &in) {
  std::ifstream f(in.corpus);
  if (!f) throw DataError("cannot open corpus file: " + in.corpus);
  ValidationReport r = validate_corpus(f);
  auto out = open_out(g, "validation.tsv");
  write_fingerprint_line(out, load_config(g).fingerprint());
  out << "line\tdoc_id\treason\n";
  for (const auto &rej : r.rejected) out << rej.line << '\t' << rej.doc_id << '\t' << rej.reason << '\n';
  std::cout << "documents\t" << r.docs << "\nsentences\t" << r.sentences << "\nrejected\t" << r.rejected.size() << '\n';
  for (const auto &[type, n] : r.mentions_by_type) std::cout << "mentions." << type << '\t' << n << '\n';
  if (!in.kb.empty()) {
    Diagnostics diag;
    KnowledgeBase kb = load_kb(in.kb, &diag);
    std::cout << "kb_pairs\t" << kb.size() << '\n';
    report_diagnostics(diag);
  }
  return r.rejected.empty() ? 0 : 2;
}

int cmd_label(const Globals &g, const Inputs &in) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  KnowledgeBase kb = load_kb(in.kb);
  LabeledSet set = label_corpus(docs, kb, cfg.candidates);
  auto out = open_out(g, "candidates.tsv");
  write_fingerprint_line(out, cfg.fingerprint());
  write_candidates_tsv(out, set.instances);
  auto stats = open_out(g, "label_stats.tsv");
  write_fingerprint_line(stats, cfg.fingerprint());
  const auto &s = set.stats;
  stats << "stage\tunique_pairs\tinstances\tkb_matching\n"
        << "all\t" << s.all.unique_pairs << '\t' << s.all.instances << '\t' << s.all.kb_matching << '\n'
        << "retained\t" << s.retained.unique_pairs << '\t' << s.retained.instances << '\t' << s.retained.kb_matching
        << '\n';
  stats << "# positives=" << s.positives << " negatives=" << s.negatives << " unlabeled=" << s.unlabeled << '\n';
  std::cout << "positives\t" << s.positives << "\nnegatives\t" << s.negatives << "\nunlabeled\t" << s.unlabeled << '\n';
  return 0;
}

int cmd_cv(const Globals &g, const Inputs &in, bool shuffle) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  KnowledgeBase kb = load_kb(in.kb);
  CvOptions opts;
  opts.shuffle_labels = shuffle;
  opts.threads = g.threads;
  FoldReport r = cross_validate(docs, kb, cfg, opts);
  auto out = open_out(g, "folds.tsv");
  write_fold_report(out, r);
  report_diagnostics(r.diag);
  std::cout << "macro_accuracy\t" << format_double(r.macro_accuracy) << '\n';
  return 0;
}

int cmd_sweep(const Globals &g, const Inputs &in, const std::vector<std::size_t> &n_values,
              const std::vector<double> &weights, const std::vector<std::string> &edges, const std::vector<int> &windows) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  KnowledgeBase kb = load_kb(in.kb);
  SweepOptions opts;
  opts.window_sizes = windows;
  opts.threads = g.threads;
  SweepTable t = sweep(docs, kb, cfg, n_values, weights, edges, opts);
  auto out = open_out(g, "sweep.tsv");
  write_sweep_table(out, t);
  write_sweep_table(std::cout, t);
  report_diagnostics(t.diag);
  return 0;
}

int cmd_train(const Globals &g, const Inputs &in, const std::string &features) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  KnowledgeBase kb = load_kb(in.kb);
  Diagnostics diag;
  Model m = train_model(docs, kb, cfg, g.threads, &diag);
  fs::create_directories(g.out);
  std::string path = in.model.empty() ? (fs::path(g.out) / "model.dsxm").string() : in.model;
  save_model(m, path);
  auto cfg_out = open_out(g, "run_config.toml");
  cfg_out << cfg.to_toml();
  if (!features.empty()) dump_features(docs, cfg, features);
  report_diagnostics(diag);
  std::cout << "model\t" << path << "\nfingerprint\t" << hex64(m.meta.fingerprint) << '\n';
  return 0;
}

ExtractionReport extract_from(const Globals &g, const Inputs &in, const RunConfig &cfg,
                              const std::vector<double> &thresholds, const std::vector<Document> &docs) {
  Model m = load_model(in.model);
  std::optional<KnowledgeBase> kb;
  if (!in.kb.empty()) kb = load_kb(in.kb);
  return run_extraction(docs, m, cfg, thresholds, kb ? &*kb : nullptr, g.threads);
}

int cmd_extract(const Globals &g, const Inputs &in, const std::vector<double> &thresholds,
                const std::string &features) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  ExtractionReport r = extract_from(g, in, cfg, parse_thresholds(thresholds), docs);
  auto counts = open_out(g, "extraction_counts.tsv");
  write_extraction_counts(counts, r, cfg.candidates);
  auto rel = open_out(g, "relations.tsv");
  write_relations(rel, r);
  auto inst = open_out(g, "instances.tsv");
  write_scored_instances(inst, r);
  if (!features.empty()) dump_features(docs, cfg, features);
  if (r.no_path) note("no_path=" + std::to_string(r.no_path));
  write_extraction_counts(std::cout, r, cfg.candidates);
  return 0;
}

std::vector<ReviewStratum> parse_strata(const std::vector<std::string> &specs) {
  std::vector<ReviewStratum> out;
  for (const auto &s : specs) {
    auto parts = split(s, ':');
    if (parts.size() != 2) throw CLI::ValidationError("--strata", "expected threshold:count, got " + s);
    try {
      out.push_back({std::stod(parts[0]), static_cast<std::size_t>(std::stoul(parts[1]))});
    } catch (const std::exception &) {
      throw CLI::ValidationError("--strata", "expected threshold:count, got " + s);
    }
  }
  return out;
}

int cmd_sample(const Globals &g, const Inputs &in, const std::vector<std::string> &strata_spec) {
  RunConfig cfg = load_config(g);
  auto strata = parse_strata(strata_spec);
  auto docs = read_corpus_file(in.corpus);
  std::vector<double> thresholds;
  for (const auto &s : strata) thresholds.push_back(s.threshold);
  ExtractionReport r = extract_from(g, in, cfg, thresholds, docs);
  Diagnostics diag;
  auto rows = sample_for_review(r.instances, strata, cfg.seed, &diag);
  auto out = open_out(g, "review_sample.tsv");
  write_review_sample(out, rows, strata, r.fingerprint);
  report_diagnostics(diag);
  std::cout << "sampled\t" << rows.size() << '\n';
  return 0;
}

int cmd_paths(const Globals &g, const Inputs &in, const std::string &doc_id, const std::string &dot, std::size_t n) {
  RunConfig cfg = load_config(g);
  auto docs = read_corpus_file(in.corpus);
  auto it = std::find_if(docs.begin(), docs.end(), [&](const Document &d) { return d.doc_id == doc_id; });
  if (it == docs.end()) throw DataError("no document with doc_id " + doc_id);
  Diagnostics diag;
  DocumentGraph graph = build_graph(*it, cfg.graph, &diag);
  if (!dot.empty()) {
    std::ofstream f(dot, std::ios::binary);
    if (!f) throw DataError("cannot write " + dot);
    write_dot(f, graph, doc_id);
  }
  const std::size_t k = n ? n : cfg.n_paths;
  for (const auto &c : document_candidates(*it, cfg.candidates)) {
    std::cout << "# " << c.mention_1.entity_id << " (" << c.mention_1.sentence << ':' << c.mention_1.head << ") "
              << c.mention_2.entity_id << " (" << c.mention_2.sentence << ':' << c.mention_2.head << ")"
              << (c.minimal_span ? "" : " non-minimal") << '\n';
    NodeId a = node_of_mention(*it, c.mention_1), b = node_of_mention(*it, c.mention_2);
    if (a == b) continue;
    auto paths = top_k_paths(graph, a, b, k, PathSearchOptions{}, &diag);
    for (const Path &p : paths) std::cout << format_path(graph, p) << '\n';
  }
  report_diagnostics(diag);
  return 0;
}

int cmd_synth(const Globals &g, const std::string &params_file) {
  SynthParams p;
  if (!params_file.empty()) p = SynthParams::from_toml(TomlTable::parse_file(params_file));
  if (g.seed) p.seed = *g.seed;
  SynthCorpus c = generate(p);
  auto corpus = open_out(g, "corpus.jsonl");
  write_corpus(corpus, c.docs);
  auto kb = open_out(g, "kb.tsv");
  write_kb(kb, c.kb);
  auto truth = open_out(g, "ground_truth.tsv");
  write_ground_truth(truth, c.truth);
  std::cout << "documents\t" << c.docs.size() << "\nkb_pairs\t" << c.kb.size() << "\nrewired_arcs\t" << c.rewired_arcs
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Distant-supervision cross-sentence relation extraction"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "run configuration (TOML)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "override the configured seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory");

  Inputs in;
  auto corpus_opt = [&](CLI::App *s) { s->add_option("--corpus", in.corpus, "corpus JSONL")->required(); };
  auto kb_opt = [&](CLI::App *s, bool required) {
    auto *o = s->add_option("--kb", in.kb, "knowledge base TSV");
    if (required) o->required();
  };
  auto model_opt = [&](CLI::App *s, bool required) {
    auto *o = s->add_option("--model", in.model, "model file");
    if (required) o->required();
  };

  auto *validate = app.add_subcommand("validate", "check a corpus (and optionally a KB)");
  corpus_opt(validate);
  kb_opt(validate, false);

  auto *label = app.add_subcommand("label", "distant-supervision labeling; writes candidates.tsv");
  corpus_opt(label);
  kb_opt(label, true);

  bool shuffle = false;
  auto *cv = app.add_subcommand("cv", "five-fold cross-validation; writes folds.tsv");
  corpus_opt(cv);
  kb_opt(cv, true);
  cv->add_flag("--shuffle-labels", shuffle, "permute training labels (control run)");

  std::vector<std::size_t> n_values{1, 3, 10, 30};
  std::vector<double> weights{1, 2, 4, 8, 16, 32};
  std::vector<std::string> edges{"all"};
  std::vector<int> windows{1, 3};
  auto *sw = app.add_subcommand("sweep", "ablation grid; writes sweep.tsv");
  corpus_opt(sw);
  kb_opt(sw, true);
  sw->add_option("--n-paths", n_values, "path counts")->delimiter(',');
  sw->add_option("--adj-weights", weights, "adjacency weights")->delimiter(',');
  sw->add_option("--edges", edges, "edge toggles such as dep+adj or all")->delimiter(',');
  sw->add_option("--windows", windows, "sentence windows K")->delimiter(',');

  std::string features;
  auto *train = app.add_subcommand("train", "train on all labeled instances; writes a model file");
  corpus_opt(train);
  kb_opt(train, true);
  model_opt(train, false);
  train->add_option("--dump-features", features, "write pre-hash feature strings to this file");

  std::vector<double> thresholds;
  auto *extract = app.add_subcommand("extract", "score minimal-span candidates and aggregate per pair");
  corpus_opt(extract);
  model_opt(extract, true);
  kb_opt(extract, false);
  extract->add_option("--thresholds", thresholds, "probability thresholds")->delimiter(',');
  extract->add_option("--dump-features", features, "write pre-hash feature strings to this file");

  std::vector<std::string> strata{"0:150", "0.5:150", "0.9:150"};
  auto *sample = app.add_subcommand("sample", "stratified review sample of extracted instances");
  corpus_opt(sample);
  model_opt(sample, true);
  kb_opt(sample, false);
  sample->add_option("--strata", strata, "threshold:count pairs")->delimiter(',');

  std::string doc_id, dot;
  std::size_t n_paths = 0;
  auto *paths = app.add_subcommand("paths", "print the K-shortest paths for each candidate of a document");
  corpus_opt(paths);
  paths->add_option("--doc", doc_id, "document id")->required();
  paths->add_option("-n,--n-paths", n_paths, "paths per candidate (default: run.n_paths)");
  paths->add_option("--dot", dot, "write the document graph in DOT format");

  std::string params;
  auto *synth = app.add_subcommand("synth", "generate a synthetic corpus, KB and ground truth");
  synth->add_option("--params", params, "synthesis parameters (TOML)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate) return cmd_validate(g, in);
    if (*label) return cmd_label(g, in);
    if (*cv) return cmd_cv(g, in, shuffle);
    if (*sw) return cmd_sweep(g, in, n_values, weights, edges, windows);
    if (*train) return cmd_train(g, in, features);
    if (*extract) return cmd_extract(g, in, thresholds, features);
    if (*sample) return cmd_sample(g, in, strata);
    if (*paths) return cmd_paths(g, in, doc_id, dot, n_paths);
    if (*synth) return cmd_synth(g, params);
  } catch (const CLI::ValidationError &e) {
    note(e.what());
    return 1;
  } catch (const DataError &e) {
    note(std::string("error: ") + e.what());
    return 2;
  } catch (const std::exception &e) {
    note(std::string("internal error: ") + e.what());
    return 3;
  }
  return 3;
}
