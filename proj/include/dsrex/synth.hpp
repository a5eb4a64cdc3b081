#ifndef DSREX_SYNTH_HPP
#define DSREX_SYNTH_HPP

// Synthetic corpus + knowledge base generator with planted relation
// patterns, label noise and parse noise.
//
// Every sentence comes from a small template written as
//   word[/lemma]/POS|heads|labels
// per token, where heads is "r" (root), "-" (unattached) or a comma list of
// token indices with matching labels. Placeholders in braces are filled
// from closed lexicons: {D} drug, {G} gene, {T3}/{TB}/{TP} trigger verb
// (3rd person, base, participle), {X} distractor participle, {C} carrier
// participle, {N} filler noun, {MP}/{MN} affirming/negating modifier.
// Modifier templates attach the modifier both to the trigger and to an
// entity, so it lies on the second-cheapest dependency path only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dsrex/common.hpp"
#include "dsrex/config.hpp"
#include "dsrex/corpus.hpp"

namespace dsrex {

struct SynthParams {
  int docs = 500;
  int min_sentences = 4;
  int max_sentences = 8;
  int vocabulary = 24;  // filler nouns in use
  int drugs = 150;
  int genes = 150;
  int kb_pairs = 150;
  double cross_fraction = 0.4;   // planted expressions that span sentences
  double hard_negatives = 0.8;   // negative episodes that reuse the trigger lexicon
  double redundancy = 0.0;       // same-sentence positives preceded by a far gene mention
  double label_noise = 0.0;
  double parse_noise = 0.0;
  bool discourse = false;
  std::uint64_t seed = 1;

  void validate() const {
    auto rate = [](double r, const char *name) {
      if (!(r >= 0.0 && r <= 1.0)) throw ValidationError(std::string("synth.") + name + " must be in [0, 1]");
    };
    if (docs < 1 || drugs < 1 || genes < 1 || kb_pairs < 1 || vocabulary < 1)
      throw ValidationError("synth counts must be positive");
    if (min_sentences < 3 || max_sentences < min_sentences)
      throw ValidationError("synth sentence range must satisfy 3 <= min <= max");
    rate(cross_fraction, "cross_fraction");
    rate(hard_negatives, "hard_negatives");
    rate(redundancy, "redundancy");
    rate(label_noise, "label_noise");
    rate(parse_noise, "parse_noise");
    if (static_cast<long long>(kb_pairs) > static_cast<long long>(drugs) * genes)
      throw ValidationError("synth.kb_pairs exceeds drugs x genes");
  }

  static SynthParams from_toml(const TomlTable &t) {
    SynthParams p;
    const std::string s = "synth.";
    t.get(s + "docs", p.docs);
    t.get(s + "min_sentences", p.min_sentences);
    t.get(s + "max_sentences", p.max_sentences);
    t.get(s + "vocabulary", p.vocabulary);
    t.get(s + "drugs", p.drugs);
    t.get(s + "genes", p.genes);
    t.get(s + "kb_pairs", p.kb_pairs);
    t.get(s + "cross_fraction", p.cross_fraction);
    t.get(s + "hard_negatives", p.hard_negatives);
    t.get(s + "redundancy", p.redundancy);
    t.get(s + "label_noise", p.label_noise);
    t.get(s + "parse_noise", p.parse_noise);
    t.get(s + "discourse", p.discourse);
    t.get(s + "seed", p.seed);
    p.validate();
    return p;
  }
};

/// One planted episode, for oracle evaluation.
struct GroundTruth {
  std::string doc_id;
  std::string entity_1;
  std::string entity_2;
  int sent_1 = 0;
  int sent_2 = 0;
  std::string pattern;
  bool expressed = false;  // the text states the relation
  bool in_kb = false;
  bool operator==(const GroundTruth &) const = default;
};

struct SynthCorpus {
  std::vector<Document> docs;
  KnowledgeBase kb;
  std::vector<GroundTruth> truth;
  std::size_t rewired_arcs = 0;
};

namespace synth {

struct Verb {
  const char *third;
  const char *base;
  const char *participle;
};

inline const std::vector<Verb> &triggers() {
  static const std::vector<Verb> v = {{"inhibits", "inhibit", "inhibited"},    {"blocks", "block", "blocked"},
                                      {"suppresses", "suppress", "suppressed"}, {"targets", "target", "targeted"},
                                      {"represses", "repress", "repressed"},    {"antagonizes", "antagonize", "antagonized"}};
  return v;
}

inline const std::vector<Verb> &distractors() {
  static const std::vector<Verb> v = {{"measures", "measure", "measured"}, {"compares", "compare", "compared"},
                                      {"observes", "observe", "observed"}, {"detects", "detect", "detected"},
                                      {"assesses", "assess", "assessed"},   {"examines", "examine", "examined"}};
  return v;
}

inline const std::vector<Verb> &carriers() {
  static const std::vector<Verb> v = {{"administers", "administer", "administered"},
                                      {"delivers", "deliver", "delivered"},
                                      {"infuses", "infuse", "infused"},
                                      {"injects", "inject", "injected"}};
  return v;
}

inline const std::vector<std::string> &affirming() {
  static const std::vector<std::string> v = {"directly", "potently", "selectively"};
  return v;
}

inline const std::vector<std::string> &negating() {
  static const std::vector<std::string> v = {"never", "not", "hardly"};
  return v;
}

inline const std::vector<std::string> &nouns() {
  static const std::vector<std::string> v = {
      "cells",    "patients", "samples",  "tumors",   "mice",     "lines",    "cultures", "tissues",
      "assays",   "models",   "biopsies", "cohorts",  "organoids", "xenografts", "extracts", "isolates",
      "animals",  "donors",   "subjects", "specimens", "clones",  "colonies", "lysates",  "fractions",
      "neurons",  "fibroblasts", "explants", "strains", "volunteers", "slices", "spheroids", "grafts"};
  return v;
}

enum class Family {
  kSamePositive,
  kSameHard,
  kSameEasy,
  kCarrier,     // drug sentence opening a cross-sentence expression
  kTriggered,   // gene sentence closing a positive cross-sentence expression
  kFailed,      // gene sentence closing a hard cross-sentence negative
  kDrugOnly,
  kGeneOnly,
  kFiller,
};

struct Template {
  const char *name;
  Family family;
  const char *text;
};

inline const std::vector<Template> &templates() {
  static const std::vector<Template> t = {
      {"active", Family::kSamePositive,
       "{D}|2|nsubj strongly/RB|2|advmod {T3}|r the/DT|4|det {G}|2|dobj in/IN|-|- {N}|2|prep_in ./.|2|punct"},
      {"passive", Family::kSamePositive, "{G}|2|nsubjpass is/be/VBZ|2|auxpass {TP}|r by/IN|-|- {D}|2|agent ./.|2|punct"},
      {"nominal", Family::kSamePositive,
       "{D}|1|nn treatment/NN|2|nsubj {T3}|r {G}|4|nn expression/NN|2|dobj ./.|2|punct"},
      {"control", Family::kSamePositive,
       "{D}|1,3|nsubj,xsubj continues/continue/VBZ|r to/TO|3|aux {TB}|1|xcomp {G}|3|dobj ./.|1|punct"},
      {"modified", Family::kSamePositive,
       "{D}|1|nsubj {T3}|r the/DT|3|det {G}|1,5|dobj,dep ,/,|-|- {MP}|1|advmod ./.|1|punct"},
      {"modified_by", Family::kSamePositive,
       "{G}|2|nsubjpass is/be/VBZ|2|auxpass {TP}|r by/IN|-|- {D}|2,6|agent,dep ,/,|-|- {MP}|2|advmod ./.|2|punct"},
      {"modified_neg", Family::kSameHard,
       "{D}|1|nsubj {T3}|r the/DT|3|det {G}|1,5|dobj,dep ,/,|-|- {MN}|1|advmod ./.|1|punct"},
      {"modified_by_neg", Family::kSameHard,
       "{G}|2|nsubjpass is/be/VBZ|2|auxpass {TP}|r by/IN|-|- {D}|2,6|agent,dep ,/,|-|- {MN}|2|advmod ./.|2|punct"},
      {"control_neg", Family::kSameHard,
       "{D}|1,3|nsubj,xsubj fails/fail/VBZ|r to/TO|3|aux {TB}|1|xcomp {G}|3|dobj ./.|1|punct"},
      {"swapped", Family::kSameEasy, "{G}|1|nsubj {T3}|r the/DT|3|det {D}|1|dobj ./.|1|punct"},
      {"compared", Family::kSameEasy,
       "{D}|2|nsubjpass was/be/VBD|2|auxpass {X}|r with/IN|-|- {G}|2|prep_with in/IN|-|- {N}|2|prep_in ./.|2|punct"},
      {"levels", Family::kSameEasy,
       "{G}|1|nn levels/level/NNS|3|nsubjpass were/be/VBD|3|auxpass {X}|r after/IN|-|- {D}|6|nn exposure/NN|3|prep_after "
       "./.|3|punct"},
      {"carrier", Family::kCarrier, "{D}|2|nsubjpass was/be/VBD|2|auxpass {C}|r to/TO|-|- {N}|2|prep_to ./.|2|punct"},
      {"received", Family::kCarrier, "{N}|1|nsubj received/receive/VBD|r {D}|1|dobj daily/RB|1|advmod ./.|1|punct"},
      {"treatment", Family::kTriggered, "this/DT|1|det treatment/NN|2|nsubj {T3}|r {G}|2|dobj ./.|2|punct"},
      {"result", Family::kTriggered,
       "{G}|2|nsubjpass was/be/VBD|2|auxpass {TP}|r as/IN|-|- a/DT|5|det result/NN|2|prep_as ./.|2|punct"},
      {"continued", Family::kTriggered,
       "treatment/NN|1,3|nsubj,xsubj continues/continue/VBZ|r to/TO|3|aux {TB}|1|xcomp {G}|3|dobj ./.|1|punct"},
      {"treatment_mod", Family::kTriggered,
       "this/DT|1|det treatment/NN|2|nsubj {T3}|r the/DT|4|det {G}|2,6|dobj,dep ,/,|-|- {MP}|2|advmod ./.|2|punct"},
      {"treatment_neg", Family::kFailed,
       "this/DT|1|det treatment/NN|2|nsubj {T3}|r the/DT|4|det {G}|2,6|dobj,dep ,/,|-|- {MN}|2|advmod ./.|2|punct"},
      {"failed", Family::kFailed,
       "treatment/NN|1,3|nsubj,xsubj fails/fail/VBZ|r to/TO|3|aux {TB}|1|xcomp {G}|3|dobj ./.|1|punct"},
      {"drug_only", Family::kDrugOnly, "{D}|2|nsubjpass was/be/VBD|2|auxpass {X}|r in/IN|-|- {N}|2|prep_in ./.|2|punct"},
      {"drug_levels", Family::kDrugOnly,
       "levels/level/NNS|4|nsubjpass of/IN|-|- {D}|0|prep_of were/be/VBD|4|auxpass {X}|r ./.|4|punct"},
      {"gene_only", Family::kGeneOnly,
       "{G}|1|nn expression/NN|3|nsubjpass was/be/VBD|3|auxpass {X}|r in/IN|-|- {N}|3|prep_in ./.|3|punct"},
      {"gene_expressed", Family::kGeneOnly, "{N}|1|nsubj expressed/express/VBD|r {G}|1|dobj ./.|1|punct"},
      {"filler", Family::kFiller,
       "{N}|2|nsubjpass were/be/VBD|2|auxpass {X}|r after/IN|-|- treatment/NN|2|prep_after ./.|2|punct"},
      {"consistent", Family::kFiller, "results/result/NNS|1|nsubj were/be/VBD|r consistent/JJ|1|acomp ./.|1|punct"},
  };
  return t;
}

inline std::vector<const Template *> family(Family f) {
  std::vector<const Template *> out;
  for (const auto &t : templates())
    if (t.family == f) out.push_back(&t);
  return out;
}

struct Fill {
  std::string drug;
  std::string gene;
  const Verb *trigger = nullptr;
  const Verb *distractor = nullptr;
  const Verb *carrier = nullptr;
  std::string noun;
  std::string affirm;
  std::string negate;
};

struct Realized {
  Sentence sentence;
  int drug_token = -1;
  int gene_token = -1;
};

inline Realized realize(const Template &tpl, const Fill &fill) {
  Realized r;
  auto pieces = split(tpl.text, ' ');
  int root = -1;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto parts = split(pieces[i], '|');
    if (parts.size() == 2 && parts[1] == "r") parts.emplace_back();
    if (parts.size() != 3) throw std::logic_error(std::string("bad template token in ") + tpl.name);
    const std::string &word = parts[0];
    Token tok;
    tok.index = static_cast<int>(i);
    auto set_verb = [&](const Verb *v, int form) {
      if (!v) throw std::logic_error(std::string("template needs a verb: ") + tpl.name);
      tok.surface = form == 0 ? v->third : form == 1 ? v->base : v->participle;
      tok.lemma = v->base;
      tok.pos = form == 0 ? "VBZ" : form == 1 ? "VB" : "VBN";
    };
    if (word == "{D}") {
      tok = {tok.index, fill.drug, to_lower(fill.drug), "NNP"};
      r.drug_token = tok.index;
    } else if (word == "{G}") {
      tok = {tok.index, fill.gene, to_lower(fill.gene), "NNP"};
      r.gene_token = tok.index;
    } else if (word == "{T3}") {
      set_verb(fill.trigger, 0);
    } else if (word == "{TB}") {
      set_verb(fill.trigger, 1);
    } else if (word == "{TP}") {
      set_verb(fill.trigger, 2);
    } else if (word == "{X}") {
      set_verb(fill.distractor, 2);
    } else if (word == "{C}") {
      set_verb(fill.carrier, 2);
    } else if (word == "{MP}") {
      tok = {tok.index, fill.affirm, fill.affirm, "RB"};
    } else if (word == "{MN}") {
      tok = {tok.index, fill.negate, fill.negate, "RB"};
    } else if (word == "{N}") {
      tok = {tok.index, fill.noun, fill.noun, "NNS"};
    } else {
      auto f = split(word, '/');
      tok.surface = f[0];
      tok.lemma = f.size() == 3 ? f[1] : to_lower(f[0]);
      tok.pos = f.back();
    }
    r.sentence.tokens.push_back(std::move(tok));
    if (parts[1] == "r") {
      root = static_cast<int>(i);
    } else if (parts[1] != "-") {
      auto heads = split(parts[1], ',');
      auto labels = split(parts[2], ',');
      for (std::size_t k = 0; k < heads.size(); ++k)
        r.sentence.arcs.push_back({std::stoi(heads[k]), static_cast<int>(i), labels[k]});
    }
  }
  r.sentence.root = root;
  return r;
}

// Sentence roles that must not meet across episodes: a carrier sentence
// followed or preceded (within two sentences) by a trigger-rooted sentence
// would form the cross-sentence positive shape by accident.
enum class Role { kNone, kCarrier, kTrigger };

inline Role role_of(Family f) {
  switch (f) {
    case Family::kCarrier: return Role::kCarrier;
    case Family::kSamePositive:
    case Family::kSameHard:
    case Family::kTriggered:
    case Family::kFailed: return Role::kTrigger;
    default: return Role::kNone;
  }
}

struct PlannedSentence {
  const Template *tpl;
  Fill fill;
};

struct Episode {
  std::vector<PlannedSentence> sentences;
  bool planted = false;
  std::string pattern;
  bool expressed = false;
  bool in_kb = false;
  int drug_at = -1;  // index into `sentences`
  int gene_at = -1;
};

class Builder {
 public:
  Builder(const SynthParams &p, Rng &rng, const KnowledgeBase &kb, const std::vector<std::string> &drugs,
          const std::vector<std::string> &genes)
      : p_(p), rng_(rng), kb_(kb), drugs_(drugs), genes_(genes) {}

  template <typename T>
  const T &pick(const std::vector<T> &v) {
    return v[static_cast<std::size_t>(rng_.below(v.size()))];
  }

  Fill fill(std::string drug = {}, std::string gene = {}) {
    Fill f;
    f.drug = std::move(drug);
    f.gene = std::move(gene);
    f.trigger = &pick(triggers());
    f.distractor = &pick(distractors());
    f.carrier = &pick(carriers());
    f.affirm = pick(affirming());
    f.negate = pick(negating());
    const auto &n = nouns();
    f.noun = n[static_cast<std::size_t>(rng_.below(std::min<std::size_t>(n.size(), p_.vocabulary)))];
    return f;
  }

  // An entity not yet in the document whose pairing with the document's
  // other entities never hits the KB.
  std::string fresh_drug(const std::set<std::string> &used_d, const std::set<std::string> &used_g) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const std::string &d = pick(drugs_);
      if (used_d.count(d)) continue;
      bool clash = false;
      for (const auto &g : used_g) clash = clash || kb_.contains(d, g);
      if (!clash) return d;
    }
    return pick(drugs_);
  }

  std::string fresh_gene(const std::set<std::string> &used_d, const std::set<std::string> &used_g) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const std::string &g = pick(genes_);
      if (used_g.count(g)) continue;
      bool clash = false;
      for (const auto &d : used_d) clash = clash || kb_.contains(d, g);
      if (!clash) return g;
    }
    return pick(genes_);
  }

  std::pair<std::string, std::string> non_kb_pair(std::set<std::string> &used_d, std::set<std::string> &used_g) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::string d = fresh_drug(used_d, used_g);
      std::string g = fresh_gene(used_d, used_g);
      if (!kb_.contains(d, g)) return {d, g};
    }
    return {fresh_drug(used_d, used_g), fresh_gene(used_d, used_g)};
  }

  Episode positive(std::string d, std::string g, bool cross, bool in_kb) {
    Episode e;
    e.planted = true;
    e.expressed = true;
    e.in_kb = in_kb;
    if (!cross) {
      if (rng_.bernoulli(p_.redundancy)) {
        e.sentences.push_back({pick(family(Family::kGeneOnly)), fill({}, g)});
      }
      const Template *t = pick(family(Family::kSamePositive));
      e.drug_at = e.gene_at = static_cast<int>(e.sentences.size());
      e.sentences.push_back({t, fill(d, g)});
      e.pattern = t->name;
      return e;
    }
    const Template *a = pick(family(Family::kCarrier));
    const Template *b = pick(family(Family::kTriggered));
    e.sentences.push_back({a, fill(d, {})});
    if (rng_.bernoulli(0.5)) e.sentences.push_back({pick(family(Family::kFiller)), fill()});
    e.sentences.push_back({b, fill({}, g)});
    e.drug_at = 0;
    e.gene_at = static_cast<int>(e.sentences.size()) - 1;
    e.pattern = std::string("cross_") + a->name + "_" + b->name;
    return e;
  }

  Episode negative(std::string d, std::string g, bool cross, bool in_kb) {
    Episode e;
    e.planted = true;
    e.expressed = false;
    e.in_kb = in_kb;
    const bool hard = rng_.bernoulli(p_.hard_negatives);
    if (!cross) {
      const Template *t = pick(family(hard ? Family::kSameHard : Family::kSameEasy));
      e.sentences.push_back({t, fill(d, g)});
      e.drug_at = e.gene_at = 0;
      e.pattern = t->name;
      return e;
    }
    const Template *a = pick(family(hard ? Family::kCarrier : Family::kDrugOnly));
    const Template *b = pick(family(hard ? Family::kFailed : Family::kGeneOnly));
    e.sentences.push_back({a, fill(d, {})});
    if (rng_.bernoulli(0.5)) e.sentences.push_back({pick(family(Family::kFiller)), fill()});
    e.sentences.push_back({b, fill({}, g)});
    e.drug_at = 0;
    e.gene_at = static_cast<int>(e.sentences.size()) - 1;
    e.pattern = std::string("cross_") + a->name + "_" + b->name;
    return e;
  }

  Episode single(Family f, std::string d, std::string g) {
    Episode e;
    e.sentences.push_back({pick(family(f)), fill(std::move(d), std::move(g))});
    return e;
  }

  Episode filler() { return single(Family::kFiller, {}, {}); }

 private:
  const SynthParams &p_;
  Rng &rng_;
  const KnowledgeBase &kb_;
  const std::vector<std::string> &drugs_;
  const std::vector<std::string> &genes_;
};

inline const Template *pick_filler(Builder &b) { return b.pick(family(Family::kFiller)); }

inline std::string entity_name(const char *prefix, int i, int width) {
  std::string n = std::to_string(i);
  return prefix + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(n.size()))), '0') + n;
}

}  // namespace synth

/// Rewires floor(rate * eligible) dependency arcs to a random new head in
/// the same sentence (never the dependent itself, never the old head).
/// Arcs are eligible when their sentence has at least three tokens, since
/// otherwise no other valid head exists. Tokens, mentions, roots and arc
/// dependents are untouched.
inline std::vector<Document> perturb_parses(std::vector<Document> docs, double rate, std::uint64_t seed,
                                            std::size_t *rewired = nullptr) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("perturb_parses: rate must be in [0, 1]");
  std::vector<DependencyArc *> eligible;
  std::vector<int> sentence_len;
  for (auto &d : docs)
    for (auto &s : d.sentences)
      if (s.tokens.size() >= 3)
        for (auto &a : s.arcs) {
          eligible.push_back(&a);
          sentence_len.push_back(static_cast<int>(s.tokens.size()));
        }
  const auto count = static_cast<std::size_t>(std::floor(rate * static_cast<double>(eligible.size())));
  Rng rng(seed);
  auto chosen = rng.sample_indices(eligible.size(), count);
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t k : chosen) {
    DependencyArc &a = *eligible[k];
    // Candidates: every token except the dependent and the current head.
    const int n = sentence_len[k];
    int h = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    for (int skip : {std::min(a.dependent, a.head), std::max(a.dependent, a.head)})
      if (h >= skip) ++h;
    a.head = h;
  }
  if (rewired) *rewired = count;
  return docs;
}

inline SynthCorpus generate(const SynthParams &params) {
  using namespace synth;
  params.validate();
  Rng rng(params.seed);
  SynthCorpus out;
  out.kb.relation_name = "synthetic";

  std::vector<std::string> drugs, genes;
  for (int i = 0; i < params.drugs; ++i) drugs.push_back(entity_name("Drug", i, 4));
  for (int i = 0; i < params.genes; ++i) genes.push_back(entity_name("GENE", i, 4));

  // KB pairs, each with a fixed expression mode.
  std::vector<std::pair<std::string, std::string>> kb_list;
  {
    const auto total = static_cast<std::size_t>(params.drugs) * static_cast<std::size_t>(params.genes);
    std::set<std::size_t> seen;
    while (kb_list.size() < static_cast<std::size_t>(params.kb_pairs)) {
      std::size_t k = static_cast<std::size_t>(rng.below(total));
      if (!seen.insert(k).second) continue;
      kb_list.emplace_back(drugs[k / static_cast<std::size_t>(params.genes)],
                           genes[k % static_cast<std::size_t>(params.genes)]);
    }
  }
  for (const auto &[d, g] : kb_list) out.kb.insert(d, g);
  std::vector<bool> kb_cross(kb_list.size());
  {
    auto order = rng.sample_indices(kb_list.size(), kb_list.size());
    const auto n_cross = static_cast<std::size_t>(std::llround(params.cross_fraction * static_cast<double>(kb_list.size())));
    for (std::size_t i = 0; i < n_cross; ++i) kb_cross[order[i]] = true;
  }

  // Every KB pair is assigned to at least one document.
  std::vector<std::vector<std::size_t>> forced(static_cast<std::size_t>(params.docs));
  {
    auto order = rng.sample_indices(kb_list.size(), kb_list.size());
    for (std::size_t i = 0; i < order.size(); ++i) forced[i % forced.size()].push_back(order[i]);
  }

  Builder b(params, rng, out.kb, drugs, genes);
  const int width = std::max(4, static_cast<int>(std::to_string(params.docs).size()));
  for (int di = 0; di < params.docs; ++di) {
    std::set<std::string> used_d, used_g;
    std::vector<Episode> episodes;
    auto claim = [&](const std::string &d, const std::string &g) {
      if (!d.empty()) used_d.insert(d);
      if (!g.empty()) used_g.insert(g);
    };

    auto &mine = forced[static_cast<std::size_t>(di)];
    const auto n_pos = std::max<std::size_t>(mine.size(), static_cast<std::size_t>(rng.range(1, 2)));
    for (std::size_t i = 0; i < n_pos; ++i) {
      std::size_t k = i < mine.size() ? mine[i] : static_cast<std::size_t>(rng.below(kb_list.size()));
      auto [d, g] = kb_list[k];
      bool cross = kb_cross[k];
      bool in_kb = true;
      if (rng.bernoulli(params.label_noise)) {
        std::tie(d, g) = b.non_kb_pair(used_d, used_g);
        cross = rng.bernoulli(params.cross_fraction);
        in_kb = false;
      }
      claim(d, g);
      episodes.push_back(b.positive(d, g, cross, in_kb));
    }
    const auto n_neg = static_cast<std::size_t>(rng.range(2, 3));
    for (std::size_t i = 0; i < n_neg; ++i) {
      auto [d, g] = b.non_kb_pair(used_d, used_g);
      claim(d, g);
      episodes.push_back(b.negative(d, g, rng.bernoulli(params.cross_fraction), false));
    }
    const auto n_single = static_cast<std::size_t>(rng.range(0, 1));
    for (std::size_t i = 0; i < n_single; ++i) {
      if (rng.bernoulli(0.5)) {
        std::string d = b.fresh_drug(used_d, used_g);
        claim(d, {});
        episodes.push_back(b.single(Family::kDrugOnly, d, {}));
      } else {
        std::string g = b.fresh_gene(used_d, used_g);
        claim({}, g);
        episodes.push_back(b.single(Family::kGeneOnly, {}, g));
      }
    }
    std::size_t planned = 0;
    for (const auto &e : episodes) planned += e.sentences.size();
    const auto target = static_cast<std::size_t>(rng.range(params.min_sentences, params.max_sentences));
    while (planned < target) {
      episodes.push_back(b.filler());
      ++planned;
    }
    rng.shuffle(episodes);

    // Lay out, separating carrier and trigger sentences of different
    // episodes by at least three positions.
    std::vector<PlannedSentence> layout;
    std::vector<int> owner;
    Document doc;
    doc.doc_id = entity_name("doc", di, width);
    for (std::size_t ei = 0; ei < episodes.size(); ++ei) {
      const Episode &e = episodes[ei];
      auto conflicts = [&]() {
        const int base = static_cast<int>(layout.size());
        for (int j = 0; j < static_cast<int>(e.sentences.size()); ++j) {
          Role r = role_of(e.sentences[static_cast<std::size_t>(j)].tpl->family);
          if (r == Role::kNone) continue;
          for (int back = 1; back <= 2; ++back) {
            int pos = base + j - back;
            if (pos < 0 || pos >= base) continue;
            Role o = role_of(layout[static_cast<std::size_t>(pos)].tpl->family);
            if (o != Role::kNone && o != r) return true;
          }
        }
        return false;
      };
      while (conflicts()) {
        layout.push_back({pick_filler(b), b.fill()});
        owner.push_back(-1);
      }
      const int base = static_cast<int>(layout.size());
      for (const auto &s : e.sentences) {
        layout.push_back(s);
        owner.push_back(static_cast<int>(ei));
      }
      if (e.planted) {
        const auto &ds = e.sentences[static_cast<std::size_t>(e.drug_at)];
        const auto &gs = e.sentences[static_cast<std::size_t>(e.gene_at)];
        out.truth.push_back({doc.doc_id, ds.fill.drug, gs.fill.gene, base + e.drug_at, base + e.gene_at, e.pattern,
                             e.expressed, e.in_kb});
      }
    }

    for (std::size_t si = 0; si < layout.size(); ++si) {
      Realized r = realize(*layout[si].tpl, layout[si].fill);
      r.sentence.index = static_cast<int>(si);
      const int s = static_cast<int>(si);
      if (r.drug_token >= 0)
        doc.mentions.push_back({layout[si].fill.drug, "drug", s, r.drug_token, r.drug_token, r.drug_token});
      if (r.gene_token >= 0)
        doc.mentions.push_back({layout[si].fill.gene, "gene", s, r.gene_token, r.gene_token, r.gene_token});
      doc.sentences.push_back(std::move(r.sentence));
    }
    if (params.discourse && doc.sentences.size() >= 2 && rng.bernoulli(0.5)) {
      static const char *labels[] = {"Contrast", "Cause", "Elaboration"};
      const int s = static_cast<int>(rng.below(doc.sentences.size() - 1));
      auto span_in = [&](int sent) {
        const int off = doc.sentence_offset(sent);
        const int len = static_cast<int>(doc.sentences[static_cast<std::size_t>(sent)].tokens.size());
        const int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(len)));
        const int last = std::min(len - 1, first + static_cast<int>(rng.below(3)));
        return TokenRange{off + first, off + last};
      };
      DiscourseRelation rel;
      rel.label = labels[rng.below(3)];
      rel.span1 = span_in(s);
      rel.span2 = span_in(s + 1);
      doc.discourse.push_back(rel);
    }
    validate_document(doc);
    out.docs.push_back(std::move(doc));
  }

  // Label noise, second half: KB pairs that only co-occur incidentally.
  if (params.label_noise > 0.0) {
    std::set<std::pair<std::string, std::string>> expressed;
    std::size_t planted_kb = 0;
    for (const auto &t : out.truth) {
      if (t.expressed) expressed.emplace(to_lower(t.entity_1), to_lower(t.entity_2));
      planted_kb += t.expressed && t.in_kb;
    }
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> pool;  // -> (doc, mention)
    for (std::size_t di = 0; di < out.docs.size(); ++di) {
      const auto &ms = out.docs[di].mentions;
      for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = 0; j < ms.size(); ++j) {
          if (ms[i].entity_type != "drug" || ms[j].entity_type != "gene") continue;
          if (std::abs(ms[i].sentence - ms[j].sentence) > 2) continue;
          std::pair<std::string, std::string> key{to_lower(ms[i].entity_id), to_lower(ms[j].entity_id)};
          if (expressed.count(key) || out.kb.pairs.count(key)) continue;
          pool.emplace(key, std::make_pair(di, i * ms.size() + j));
        }
    }
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto &kv : pool) keys.push_back(kv.first);
    const auto wanted = static_cast<std::size_t>(std::llround(params.label_noise * static_cast<double>(planted_kb)));
    for (std::size_t k : rng.sample_indices(keys.size(), wanted)) {
      const auto &[di, code] = pool[keys[k]];
      const auto &doc = out.docs[di];
      const auto &m1 = doc.mentions[code / doc.mentions.size()];
      const auto &m2 = doc.mentions[code % doc.mentions.size()];
      out.kb.insert(m1.entity_id, m2.entity_id);
      out.truth.push_back({doc.doc_id, m1.entity_id, m2.entity_id, m1.sentence, m2.sentence, "incidental", false, true});
    }
  }

  if (params.parse_noise > 0.0)
    out.docs = perturb_parses(std::move(out.docs), params.parse_noise, splitmix64(params.seed ^ 0x7061727365ULL),
                              &out.rewired_arcs);
  return out;
}

inline void write_ground_truth(std::ostream &out, const std::vector<GroundTruth> &truth) {
  out << "doc_id\tentity_id_1\tentity_id_2\tsent_1\tsent_2\tpattern\texpressed\tin_kb\n";
  for (const auto &t : truth)
    out << t.doc_id << '\t' << t.entity_1 << '\t' << t.entity_2 << '\t' << t.sent_1 << '\t' << t.sent_2 << '\t'
        << t.pattern << '\t' << (t.expressed ? 1 : 0) << '\t' << (t.in_kb ? 1 : 0) << '\n';
}

}  // namespace dsrex

#endif  // DSREX_SYNTH_HPP
