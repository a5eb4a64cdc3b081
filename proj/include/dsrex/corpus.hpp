#ifndef DSREX_CORPUS_HPP
#define DSREX_CORPUS_HPP

// Annotated-document and knowledge-base data model, plus the JSONL / TSV
// readers. Documents arrive fully pre-processed: tokens, dependency arcs,
// entity mentions, coreference links and discourse relations are all
// produced upstream and only validated here.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsrex/common.hpp"

namespace dsrex {

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  bool operator==(const Token &) const = default;
};

struct DependencyArc {
  int head = 0;
  int dependent = 0;
  std::string label;
  bool operator==(const DependencyArc &) const = default;
};

struct Sentence {
  int index = 0;
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;
  int root = 0;
  bool operator==(const Sentence &) const = default;
};

struct Mention {
  std::string entity_id;
  std::string entity_type;
  int sentence = 0;
  int first = 0;
  int last = 0;
  int head = 0;
  bool operator==(const Mention &) const = default;
};

// (sentence, token) address of a single word.
struct TokenRef {
  int sentence = 0;
  int token = 0;
  bool operator==(const TokenRef &) const = default;
  auto operator<=>(const TokenRef &) const = default;
};

struct CorefLink {
  TokenRef anaphor;
  TokenRef antecedent;
  bool operator==(const CorefLink &) const = default;
};

// Inclusive range of document-level (flat) token offsets.
struct TokenRange {
  int first = 0;
  int last = 0;
  bool operator==(const TokenRange &) const = default;
};

struct DiscourseRelation {
  std::string label;
  TokenRange span1;
  TokenRange span2;
  bool operator==(const DiscourseRelation &) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<Mention> mentions;
  std::vector<CorefLink> coref;
  std::vector<DiscourseRelation> discourse;

  bool operator==(const Document &) const = default;

  /// Flat offset of the first token of sentence `s`.
  int sentence_offset(int s) const {
    int off = 0;
    for (int i = 0; i < s; ++i) off += static_cast<int>(sentences[static_cast<std::size_t>(i)].tokens.size());
    return off;
  }

  int token_count() const { return sentence_offset(static_cast<int>(sentences.size())); }

  const Token &token(TokenRef ref) const {
    return sentences[static_cast<std::size_t>(ref.sentence)].tokens[static_cast<std::size_t>(ref.token)];
  }
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(bool ok, const std::string &what) {
  if (!ok) throw ValidationError(what);
}

inline std::string field_value(const std::string &field, long long value) {
  return field + "=" + std::to_string(value);
}

}  // namespace detail

/// Throws ValidationError naming the offending field and value.
inline void validate_document(const Document &doc) {
  using detail::field_value;
  using detail::require;
  require(!doc.doc_id.empty(), "doc_id is empty");
  require(!doc.sentences.empty(), "document has no sentences");
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence &sent = doc.sentences[s];
    const std::string where = "sentence " + std::to_string(s) + ": ";
    const int n = static_cast<int>(sent.tokens.size());
    require(n > 0, where + "no tokens");
    for (int t = 0; t < n; ++t) {
      const Token &tok = sent.tokens[static_cast<std::size_t>(t)];
      require(!tok.surface.empty(), where + "empty surface at token " + std::to_string(t));
      require(!tok.lemma.empty(), where + "empty lemma at token " + std::to_string(t));
      require(!tok.pos.empty(), where + "empty pos at token " + std::to_string(t));
    }
    require(sent.root >= 0 && sent.root < n, where + "invalid " + field_value("root", sent.root));
    for (const DependencyArc &arc : sent.arcs) {
      require(arc.head >= 0 && arc.head < n, where + "invalid arc " + field_value("head", arc.head));
      require(arc.dependent >= 0 && arc.dependent < n,
              where + "invalid arc " + field_value("dep", arc.dependent));
      require(arc.head != arc.dependent, where + "self arc at " + field_value("dep", arc.dependent));
      require(!arc.label.empty(), where + "empty arc label");
      require(arc.dependent != sent.root, where + "root token is a dependent: " + field_value("dep", arc.dependent));
    }
  }
  const int ns = static_cast<int>(doc.sentences.size());
  auto sentence_len = [&](int s) { return static_cast<int>(doc.sentences[static_cast<std::size_t>(s)].tokens.size()); };
  for (const Mention &m : doc.mentions) {
    require(!m.entity_id.empty(), "mention with empty id");
    require(!m.entity_type.empty(), "mention " + m.entity_id + " has empty type");
    require(m.sentence >= 0 && m.sentence < ns, "mention " + m.entity_id + ": invalid " + field_value("sent", m.sentence));
    require(m.first <= m.last, "mention " + m.entity_id + ": span first > last");
    const int len = sentence_len(m.sentence);
    require(m.first >= 0 && m.first < len, "mention " + m.entity_id + ": invalid " + field_value("first", m.first));
    require(m.last >= 0 && m.last < len, "mention " + m.entity_id + ": invalid " + field_value("last", m.last));
    require(m.head >= m.first && m.head <= m.last,
            "mention " + m.entity_id + ": head outside span: " + field_value("head", m.head));
  }
  auto valid_ref = [&](TokenRef r) {
    return r.sentence >= 0 && r.sentence < ns && r.token >= 0 && r.token < sentence_len(r.sentence);
  };
  for (const CorefLink &link : doc.coref) {
    require(valid_ref(link.anaphor), "coref: invalid anaphor " + field_value("ana_sent", link.anaphor.sentence) + " " +
                                         field_value("ana_tok", link.anaphor.token));
    require(valid_ref(link.antecedent), "coref: invalid antecedent " + field_value("ant_sent", link.antecedent.sentence) +
                                            " " + field_value("ant_tok", link.antecedent.token));
    require(!(link.anaphor == link.antecedent), "coref: anaphor equals antecedent");
  }
  const int total = doc.token_count();
  for (const DiscourseRelation &rel : doc.discourse) {
    require(!rel.label.empty(), "discourse relation with empty label");
    for (const auto &[name, span] : {std::pair{"s1", rel.span1}, std::pair{"s2", rel.span2}}) {
      require(span.first <= span.last, std::string("discourse ") + name + ": span first > last");
      require(span.first >= 0 && span.last < total,
              std::string("discourse: invalid ") + field_value(std::string(name) + "_last", span.last));
    }
    require(!(rel.span1 == rel.span2), "discourse: identical spans");
  }
}

// ---------------------------------------------------------------------------
// JSONL

namespace detail {

template <typename T>
T get_field(const nlohmann::json &obj, const char *name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + name + "'", line);
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception &) {
    throw ParseError(std::string("field '") + name + "' has the wrong type", line);
  }
}

inline const nlohmann::json &get_array(const nlohmann::json &obj, const char *name, std::size_t line,
                                       bool optional = false) {
  static const nlohmann::json empty = nlohmann::json::array();
  auto it = obj.find(name);
  if (it == obj.end()) {
    if (optional) return empty;
    throw ParseError(std::string("missing field '") + name + "'", line);
  }
  if (!it->is_array()) throw ParseError(std::string("field '") + name + "' is not an array", line);
  return *it;
}

}  // namespace detail

/// Parses and validates one JSONL line. `line_no` is only used in messages.
inline Document parse_document(std::string_view line, std::size_t line_no = 1) {
  using detail::get_array;
  using detail::get_field;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw ParseError("document is not a JSON object", line_no);

  Document doc;
  doc.doc_id = get_field<std::string>(j, "doc_id", line_no);
  int s_index = 0;
  for (const auto &js : get_array(j, "sentences", line_no)) {
    Sentence sent;
    sent.index = s_index++;
    int t_index = 0;
    for (const auto &jt : get_array(js, "tokens", line_no)) {
      Token tok;
      tok.index = t_index++;
      tok.surface = get_field<std::string>(jt, "surface", line_no);
      tok.lemma = get_field<std::string>(jt, "lemma", line_no);
      tok.pos = get_field<std::string>(jt, "pos", line_no);
      sent.tokens.push_back(std::move(tok));
    }
    for (const auto &ja : get_array(js, "arcs", line_no, true)) {
      sent.arcs.push_back({get_field<int>(ja, "head", line_no), get_field<int>(ja, "dep", line_no),
                           get_field<std::string>(ja, "label", line_no)});
    }
    sent.root = get_field<int>(js, "root", line_no);
    doc.sentences.push_back(std::move(sent));
  }
  for (const auto &jm : get_array(j, "mentions", line_no, true)) {
    Mention m;
    m.entity_id = get_field<std::string>(jm, "id", line_no);
    m.entity_type = get_field<std::string>(jm, "type", line_no);
    m.sentence = get_field<int>(jm, "sent", line_no);
    m.first = get_field<int>(jm, "first", line_no);
    m.last = get_field<int>(jm, "last", line_no);
    m.head = get_field<int>(jm, "head", line_no);
    doc.mentions.push_back(std::move(m));
  }
  for (const auto &jc : get_array(j, "coref", line_no, true)) {
    doc.coref.push_back({{get_field<int>(jc, "ana_sent", line_no), get_field<int>(jc, "ana_tok", line_no)},
                         {get_field<int>(jc, "ant_sent", line_no), get_field<int>(jc, "ant_tok", line_no)}});
  }
  for (const auto &jd : get_array(j, "discourse", line_no, true)) {
    doc.discourse.push_back({get_field<std::string>(jd, "label", line_no),
                             {get_field<int>(jd, "s1_first", line_no), get_field<int>(jd, "s1_last", line_no)},
                             {get_field<int>(jd, "s2_first", line_no), get_field<int>(jd, "s2_last", line_no)}});
  }
  validate_document(doc);
  return doc;
}

inline nlohmann::ordered_json document_to_json(const Document &doc) {
  nlohmann::ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["sentences"] = nlohmann::ordered_json::array();
  for (const Sentence &s : doc.sentences) {
    nlohmann::ordered_json js;
    js["tokens"] = nlohmann::ordered_json::array();
    for (const Token &t : s.tokens) js["tokens"].push_back({{"surface", t.surface}, {"lemma", t.lemma}, {"pos", t.pos}});
    js["arcs"] = nlohmann::ordered_json::array();
    for (const DependencyArc &a : s.arcs) js["arcs"].push_back({{"head", a.head}, {"dep", a.dependent}, {"label", a.label}});
    js["root"] = s.root;
    j["sentences"].push_back(std::move(js));
  }
  j["mentions"] = nlohmann::ordered_json::array();
  for (const Mention &m : doc.mentions) {
    j["mentions"].push_back({{"id", m.entity_id},
                             {"type", m.entity_type},
                             {"sent", m.sentence},
                             {"first", m.first},
                             {"last", m.last},
                             {"head", m.head}});
  }
  j["coref"] = nlohmann::ordered_json::array();
  for (const CorefLink &c : doc.coref) {
    j["coref"].push_back({{"ana_sent", c.anaphor.sentence},
                          {"ana_tok", c.anaphor.token},
                          {"ant_sent", c.antecedent.sentence},
                          {"ant_tok", c.antecedent.token}});
  }
  j["discourse"] = nlohmann::ordered_json::array();
  for (const DiscourseRelation &d : doc.discourse) {
    j["discourse"].push_back({{"label", d.label},
                              {"s1_first", d.span1.first},
                              {"s1_last", d.span1.last},
                              {"s2_first", d.span2.first},
                              {"s2_last", d.span2.last}});
  }
  return j;
}

/// One JSONL line, no trailing newline.
inline std::string serialize_document(const Document &doc) { return document_to_json(doc).dump(); }

// ---------------------------------------------------------------------------
// Corpus validation

struct RejectedDocument {
  std::size_t line = 0;
  std::string doc_id;  // empty when the line did not parse far enough
  std::string reason;
};

struct ValidationReport {
  std::size_t docs = 0;  // accepted documents
  std::size_t sentences = 0;
  std::map<std::string, std::size_t> mentions_by_type;
  std::vector<RejectedDocument> rejected;
  std::vector<Document> accepted;  // in input order
};

/// Parses every non-blank line; never throws on bad data. Duplicate doc ids
/// reject every document carrying that id.
inline ValidationReport validate_corpus(std::istream &in) {
  ValidationReport report;
  struct Parsed {
    std::size_t line;
    Document doc;
  };
  std::vector<Parsed> parsed;
  std::map<std::string, std::size_t> id_count;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      Document doc = parse_document(line, line_no);
      ++id_count[doc.doc_id];
      parsed.push_back({line_no, std::move(doc)});
    } catch (const DataError &e) {
      std::string id;
      try {
        auto j = nlohmann::json::parse(line);
        if (j.is_object() && j.contains("doc_id") && j["doc_id"].is_string()) id = j["doc_id"].get<std::string>();
      } catch (const nlohmann::json::exception &) {
      }
      report.rejected.push_back({line_no, id, e.what()});
    }
  }
  for (auto &p : parsed) {
    if (id_count[p.doc.doc_id] > 1) {
      report.rejected.push_back({p.line, p.doc.doc_id, "duplicate doc_id (ambiguous)"});
      continue;
    }
    ++report.docs;
    report.sentences += p.doc.sentences.size();
    for (const Mention &m : p.doc.mentions) ++report.mentions_by_type[m.entity_type];
    report.accepted.push_back(std::move(p.doc));
  }
  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const RejectedDocument &a, const RejectedDocument &b) { return a.line < b.line; });
  return report;
}

/// Strict loader: any bad line or duplicate id is an error.
inline std::vector<Document> read_corpus(std::istream &in) {
  ValidationReport report = validate_corpus(in);
  if (!report.rejected.empty()) {
    const auto &r = report.rejected.front();
    throw ValidationError("corpus line " + std::to_string(r.line) + " rejected: " + r.reason + " (" +
                          std::to_string(report.rejected.size()) + " rejected in total)");
  }
  return std::move(report.accepted);
}

inline std::vector<Document> read_corpus_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return read_corpus(in);
}

inline void write_corpus(std::ostream &out, const std::vector<Document> &docs) {
  for (const Document &d : docs) out << serialize_document(d) << '\n';
}

// ---------------------------------------------------------------------------
// Knowledge base

// Known instances of one relation. Ids are case-folded; slot 1 holds the
// first configured argument type, slot 2 the second.
struct KnowledgeBase {
  std::string relation_name = "related";
  std::set<std::pair<std::string, std::string>> pairs;

  bool contains(std::string_view id1, std::string_view id2) const {
    return pairs.count({to_lower(id1), to_lower(id2)}) > 0;
  }
  bool insert(std::string_view id1, std::string_view id2) {
    return pairs.emplace(to_lower(id1), to_lower(id2)).second;
  }
  std::size_t size() const { return pairs.size(); }
};

/// Reads `entity_id_1<TAB>entity_id_2` rows. Lines starting with '#' are
/// comments; a first row of literally `entity_id_1<TAB>entity_id_2` is
/// treated as a header.
inline KnowledgeBase load_kb(std::istream &in, Diagnostics *diag = nullptr) {
  KnowledgeBase kb;
  std::string line;
  std::size_t row = 0;
  std::size_t duplicates = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() < 2 || trim(cols[0]).empty() || trim(cols[1]).empty()) {
      throw FormatError("KB row " + std::to_string(row) + ": expected two tab-separated columns");
    }
    std::string a(trim(cols[0])), b(trim(cols[1]));
    if (first_data_row) {
      first_data_row = false;
      if (to_lower(a) == "entity_id_1" && to_lower(b) == "entity_id_2") continue;
    }
    if (!kb.insert(a, b)) ++duplicates;
  }
  if (diag) {
    if (kb.size() == 0) diag->warn("knowledge base is empty");
    if (duplicates) diag->count("kb_duplicate_rows", duplicates);
    diag->count("kb_pairs", kb.size());
  }
  return kb;
}

inline KnowledgeBase load_kb(const std::string &path, Diagnostics *diag = nullptr) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open KB file: " + path);
  return load_kb(in, diag);
}

inline void write_kb(std::ostream &out, const KnowledgeBase &kb) {
  out << "# relation: " << kb.relation_name << '\n';
  for (const auto &[a, b] : kb.pairs) out << a << '\t' << b << '\n';
}

}  // namespace dsrex

#endif  // DSREX_CORPUS_HPP
