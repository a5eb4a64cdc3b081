#ifndef DSREX_CANDIDATES_HPP
#define DSREX_CANDIDATES_HPP

// Candidate entity-pair instances within K-sentence windows, the
// minimal-span filter, and distant-supervision labeling with balanced
// negative sampling.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dsrex/common.hpp"
#include "dsrex/corpus.hpp"

namespace dsrex {

enum class Label : std::int8_t { kUnlabeled = -1, kNegative = 0, kPositive = 1 };

inline const char *label_name(Label l) {
  switch (l) {
    case Label::kPositive: return "POSITIVE";
    case Label::kNegative: return "NEGATIVE";
    case Label::kUnlabeled: return "UNLABELED";
  }
  return "?";
}

struct CandidateInstance {
  std::string doc_id;
  Mention mention_1;  // first configured type
  Mention mention_2;  // second configured type
  int sent_distance = 0;
  bool minimal_span = true;
  Label label = Label::kUnlabeled;

  bool operator==(const CandidateInstance &) const = default;
};

struct CandidateConfig {
  int window_k = 3;
  std::string type_1 = "drug";
  std::string type_2 = "gene";
  bool minimal_only = true;
  double negative_ratio = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (window_k < 1) throw ValidationError("candidates.window_k must be >= 1");
    if (type_1.empty() || type_2.empty()) throw ValidationError("candidates.type_1/type_2 must be non-empty");
    if (!(negative_ratio > 0.0)) throw ValidationError("candidates.negative_ratio must be positive");
  }
};

namespace detail {

inline auto mention_position(const Mention &m) { return std::tie(m.sentence, m.first, m.last, m.head, m.entity_id); }

inline bool same_occurrence(const Mention &a, const Mention &b) {
  return a.sentence == b.sentence && a.first == b.first && a.last == b.last;
}

inline std::pair<std::string, std::string> pair_key(const CandidateInstance &c) {
  return {to_lower(c.mention_1.entity_id), to_lower(c.mention_2.entity_id)};
}

}  // namespace detail

/// Every (type_1, type_2) mention pair at most K-1 sentences apart, ordered
/// by mention_1 position then mention_2 position. Pairs whose mentions have
/// an identical span are skipped.
inline std::vector<CandidateInstance> enumerate_pairs(const Document &doc, const CandidateConfig &cfg) {
  std::vector<const Mention *> first, second;
  const std::string t1 = to_lower(cfg.type_1), t2 = to_lower(cfg.type_2);
  for (const Mention &m : doc.mentions) {
    const std::string t = to_lower(m.entity_type);
    if (t == t1) first.push_back(&m);
    if (t == t2) second.push_back(&m);
  }
  auto by_position = [](const Mention *a, const Mention *b) {
    return detail::mention_position(*a) < detail::mention_position(*b);
  };
  std::stable_sort(first.begin(), first.end(), by_position);
  std::stable_sort(second.begin(), second.end(), by_position);

  std::vector<CandidateInstance> out;
  for (const Mention *a : first) {
    for (const Mention *b : second) {
      const int dist = std::abs(a->sentence - b->sentence);
      if (dist > cfg.window_k - 1) continue;
      if (detail::same_occurrence(*a, *b)) continue;
      out.push_back({doc.doc_id, *a, *b, dist, true, Label::kUnlabeled});
    }
  }
  return out;
}

/// Marks instances of one document: an instance is minimal unless another
/// instance of the same entity pair shares one of its mention occurrences
/// and has a strictly smaller sentence distance.
inline void mark_minimal_span(std::vector<CandidateInstance> &instances) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < instances.size(); ++i) groups[detail::pair_key(instances[i])].push_back(i);
  for (const auto &[key, members] : groups) {
    for (std::size_t i : members) {
      CandidateInstance &c = instances[i];
      c.minimal_span = true;
      for (std::size_t j : members) {
        const CandidateInstance &o = instances[j];
        if (i == j || o.sent_distance >= c.sent_distance) continue;
        if (detail::same_occurrence(c.mention_1, o.mention_1) || detail::same_occurrence(c.mention_2, o.mention_2)) {
          c.minimal_span = false;
          break;
        }
      }
    }
  }
}

/// enumerate_pairs followed by mark_minimal_span.
inline std::vector<CandidateInstance> document_candidates(const Document &doc, const CandidateConfig &cfg) {
  auto c = enumerate_pairs(doc, cfg);
  mark_minimal_span(c);
  return c;
}

struct CandidateStats {
  std::size_t unique_pairs = 0;
  std::size_t instances = 0;
  std::size_t kb_matching = 0;
};

struct LabelingStats {
  CandidateStats all;       // before the minimal-span filter
  CandidateStats retained;  // after it (equal to `all` when minimal_only is off)
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t unlabeled = 0;
};

struct LabeledSet {
  std::vector<CandidateInstance> instances;
  LabelingStats stats;
};

inline CandidateStats candidate_stats(const std::vector<CandidateInstance> &instances, const KnowledgeBase &kb) {
  CandidateStats s;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto &c : instances) {
    auto key = detail::pair_key(c);
    s.kb_matching += kb.pairs.count(key);
    pairs.insert(std::move(key));
  }
  s.instances = instances.size();
  s.unique_pairs = pairs.size();
  return s;
}

/// Distant-supervision labels. KB pairs become POSITIVE; floor(ratio * #pos)
/// of the remaining instances are sampled (seeded, without replacement) as
/// NEGATIVE; the rest stay UNLABELED.
inline LabeledSet label_candidates(std::vector<CandidateInstance> instances, const KnowledgeBase &kb,
                                   const CandidateConfig &cfg) {
  LabeledSet out;
  out.stats.all = candidate_stats(instances, kb);
  if (cfg.minimal_only) {
    std::erase_if(instances, [](const CandidateInstance &c) { return !c.minimal_span; });
  }
  out.stats.retained = candidate_stats(instances, kb);

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto &c = instances[i];
    if (kb.pairs.count(detail::pair_key(c))) {
      c.label = Label::kPositive;
      ++out.stats.positives;
    } else {
      c.label = Label::kUnlabeled;
      rest.push_back(i);
    }
  }
  if (out.stats.positives == 0) throw DataError("no distant-supervision signal: no candidate matches the KB");

  const auto wanted = static_cast<std::size_t>(cfg.negative_ratio * static_cast<double>(out.stats.positives));
  Rng rng(cfg.seed);
  for (std::size_t k : rng.sample_indices(rest.size(), wanted)) instances[rest[k]].label = Label::kNegative;
  out.stats.negatives = std::min(wanted, rest.size());
  out.stats.unlabeled = rest.size() - out.stats.negatives;
  out.instances = std::move(instances);
  return out;
}

/// Candidate dump: one instance per row.
inline void write_candidates_tsv(std::ostream &out, const std::vector<CandidateInstance> &instances) {
  out << "doc_id\tentity_id_1\tentity_id_2\tsent_1\tsent_2\tspan_1\tspan_2\tdistance\tminimal\tlabel\n";
  for (const auto &c : instances) {
    out << c.doc_id << '\t' << c.mention_1.entity_id << '\t' << c.mention_2.entity_id << '\t' << c.mention_1.sentence
        << '\t' << c.mention_2.sentence << '\t' << c.mention_1.first << '-' << c.mention_1.last << '\t'
        << c.mention_2.first << '-' << c.mention_2.last << '\t' << c.sent_distance << '\t' << (c.minimal_span ? 1 : 0)
        << '\t' << label_name(c.label) << '\n';
  }
}

}  // namespace dsrex

#endif  // DSREX_CANDIDATES_HPP
