#ifndef DSREX_CONFIG_HPP
#define DSREX_CONFIG_HPP

// Run configuration and its TOML representation.
//
// Only the TOML subset the configs need is read: [tables], `key = value`
// with strings, integers, floats, booleans and single-line arrays, and
// `#` comments.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dsrex/candidates.hpp"
#include "dsrex/classifier.hpp"
#include "dsrex/common.hpp"
#include "dsrex/features.hpp"
#include "dsrex/graph.hpp"

namespace dsrex {

class TomlTable {
 public:
  using Scalar = std::variant<bool, std::int64_t, double, std::string>;
  using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<Scalar>>;

  static TomlTable parse(std::istream &in) {
    TomlTable t;
    std::string line, table;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string stripped = strip_comment(line);
      std::string_view s = trim(stripped);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("unterminated table header", line_no);
        table = std::string(trim(s.substr(1, s.size() - 2)));
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
      std::string key(trim(s.substr(0, eq)));
      if (key.empty()) throw ParseError("empty key", line_no);
      std::string full = table.empty() ? key : table + "." + key;
      t.values_[full] = parse_value(trim(s.substr(eq + 1)), line_no);
    }
    return t;
  }

  static TomlTable parse_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    return parse(in);
  }

  bool has(const std::string &key) const { return values_.count(key) > 0; }
  const std::map<std::string, Value> &values() const { return values_; }

  bool get(const std::string &key, bool &out) const { return fetch(key, out); }
  bool get(const std::string &key, std::string &out) const { return fetch(key, out); }
  bool get(const std::string &key, double &out) const {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    if (auto *d = std::get_if<double>(&it->second)) out = *d;
    else if (auto *i = std::get_if<std::int64_t>(&it->second)) out = static_cast<double>(*i);
    else throw ValidationError("config key '" + key + "' must be a number");
    return true;
  }
  template <typename Int>
    requires std::is_integral_v<Int> && (!std::is_same_v<Int, bool>)
  bool get(const std::string &key, Int &out) const {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    auto *i = std::get_if<std::int64_t>(&it->second);
    if (!i) throw ValidationError("config key '" + key + "' must be an integer");
    out = static_cast<Int>(*i);
    return true;
  }
  bool get(const std::string &key, std::vector<double> &out) const {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    auto *arr = std::get_if<std::vector<Scalar>>(&it->second);
    if (!arr) throw ValidationError("config key '" + key + "' must be an array");
    out.clear();
    for (const auto &v : *arr) {
      if (auto *d = std::get_if<double>(&v)) out.push_back(*d);
      else if (auto *i = std::get_if<std::int64_t>(&v)) out.push_back(static_cast<double>(*i));
      else throw ValidationError("config key '" + key + "' must hold numbers");
    }
    return true;
  }

 private:
  template <typename T>
  bool fetch(const std::string &key, T &out) const {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    auto *v = std::get_if<T>(&it->second);
    if (!v) throw ValidationError("config key '" + key + "' has the wrong type");
    out = *v;
    return true;
  }

  static std::string strip_comment(const std::string &line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
      if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
  }

  static Scalar parse_scalar(std::string_view s, std::size_t line_no) {
    if (s.empty()) throw ParseError("missing value", line_no);
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '"') {
      if (s.size() < 2 || s.back() != '"') throw ParseError("unterminated string", line_no);
      std::string out;
      for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] == '\\' && i + 2 < s.size()) {
          char c = s[++i];
          out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
        } else {
          out += s[i];
        }
      }
      return out;
    }
    std::string num;
    for (char c : s)
      if (c != '_') num += c;
    const bool is_float = num.find_first_of(".eE") != std::string::npos && num.find("0x") != 0;
    try {
      std::size_t used = 0;
      if (is_float) {
        double d = std::stod(num, &used);
        if (used == num.size()) return d;
      } else {
        long long v = std::stoll(num, &used, 0);
        if (used == num.size()) return static_cast<std::int64_t>(v);
      }
    } catch (const std::exception &) {
    }
    throw ParseError("cannot parse value '" + std::string(s) + "'", line_no);
  }

  static Value parse_value(std::string_view s, std::size_t line_no) {
    if (!s.empty() && s.front() == '[') {
      if (s.back() != ']') throw ParseError("unterminated array", line_no);
      std::vector<Scalar> out;
      std::string_view body = trim(s.substr(1, s.size() - 2));
      if (body.empty()) return out;
      std::string cur;
      bool in_str = false;
      for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
          if (!trim(cur).empty()) out.push_back(parse_scalar(trim(cur), line_no));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!trim(cur).empty()) out.push_back(parse_scalar(trim(cur), line_no));
      return out;
    }
    return std::visit([](auto &&v) -> Value { return v; }, parse_scalar(s, line_no));
  }

  std::map<std::string, Value> values_;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  GraphConfig graph;
  CandidateConfig candidates;
  FeatureConfig features;
  TrainConfig train;
  std::size_t n_paths = 30;
  int folds = 5;
  std::uint64_t seed = 0;

  /// The global seed drives negative sampling and training.
  void set_seed(std::uint64_t s) {
    seed = s;
    candidates.seed = s;
    train.seed = s;
  }

  void validate() const {
    graph.validate();
    candidates.validate();
    features.validate();
    train.validate();
    if (n_paths < 1) throw ValidationError("run.n_paths must be >= 1");
    if (folds != 5) throw ValidationError("run.folds is fixed at 5");
  }

  /// `key=value` lines for every field that affects results, in fixed order.
  std::string canonical() const {
    std::ostringstream os;
    os << "graph.adjacency_weight=" << format_double(graph.adjacency_weight) << '\n'
       << "graph.dependency=" << graph.dependency << '\n'
       << "graph.adjacency=" << graph.adjacency << '\n'
       << "graph.nextsent=" << graph.nextsent << '\n'
       << "graph.discourse=" << graph.discourse << '\n'
       << "graph.coref=" << graph.coref << '\n'
       << "candidates.window_k=" << candidates.window_k << '\n'
       << "candidates.type_1=" << candidates.type_1 << '\n'
       << "candidates.type_2=" << candidates.type_2 << '\n'
       << "candidates.minimal_only=" << candidates.minimal_only << '\n'
       << "candidates.negative_ratio=" << format_double(candidates.negative_ratio) << '\n'
       << "candidates.seed=" << candidates.seed << '\n'
       << "features.hash_bits=" << features.hash_bits << '\n'
       << "train.lambda=" << format_double(train.lambda) << '\n'
       << "train.grad_tolerance=" << format_double(train.grad_tolerance) << '\n'
       << "train.max_iterations=" << train.max_iterations << '\n'
       << "train.history=" << train.history << '\n'
       << "train.seed=" << train.seed << '\n'
       << "run.n_paths=" << n_paths << '\n'
       << "run.folds=" << folds << '\n'
       << "run.seed=" << seed << '\n';
    return os.str();
  }

  std::uint64_t fingerprint() const { return fnv1a64(canonical()); }

  /// Digest of the fields that determine how a candidate is featurized.
  /// Stored in model files and checked before extraction.
  std::uint64_t feature_fingerprint() const {
    std::ostringstream os;
    os << "graph.adjacency_weight=" << format_double(graph.adjacency_weight) << '\n'
       << "graph.flags=" << graph.dependency << graph.adjacency << graph.nextsent << graph.discourse << graph.coref
       << '\n'
       << "candidates.types=" << to_lower(candidates.type_1) << ',' << to_lower(candidates.type_2) << '\n'
       << "features.hash_bits=" << features.hash_bits << '\n'
       << "run.n_paths=" << n_paths << '\n';
    return fnv1a64(os.str());
  }

  std::string to_toml() const {
    std::ostringstream os;
    os << "[graph]\nadjacency_weight = " << format_double(graph.adjacency_weight) << '\n'
       << "dependency = " << (graph.dependency ? "true" : "false") << '\n'
       << "adjacency = " << (graph.adjacency ? "true" : "false") << '\n'
       << "nextsent = " << (graph.nextsent ? "true" : "false") << '\n'
       << "discourse = " << (graph.discourse ? "true" : "false") << '\n'
       << "coref = " << (graph.coref ? "true" : "false") << '\n'
       << "\n[candidates]\nwindow_k = " << candidates.window_k << '\n'
       << "type_1 = \"" << candidates.type_1 << "\"\n"
       << "type_2 = \"" << candidates.type_2 << "\"\n"
       << "minimal_only = " << (candidates.minimal_only ? "true" : "false") << '\n'
       << "negative_ratio = " << format_double(candidates.negative_ratio) << '\n'
       << "\n[features]\nhash_bits = " << features.hash_bits << '\n'
       << "\n[train]\nlambda = " << format_double(train.lambda) << '\n'
       << "grad_tolerance = " << format_double(train.grad_tolerance) << '\n'
       << "max_iterations = " << train.max_iterations << '\n'
       << "history = " << train.history << '\n'
       << "\n[run]\nn_paths = " << n_paths << '\n'
       << "folds = " << folds << '\n'
       << "seed = " << seed << '\n';
    return os.str();
  }

  static RunConfig from_toml(const TomlTable &t) {
    RunConfig c;
    t.get("graph.adjacency_weight", c.graph.adjacency_weight);
    t.get("graph.dependency", c.graph.dependency);
    t.get("graph.adjacency", c.graph.adjacency);
    t.get("graph.nextsent", c.graph.nextsent);
    t.get("graph.discourse", c.graph.discourse);
    t.get("graph.coref", c.graph.coref);
    t.get("candidates.window_k", c.candidates.window_k);
    t.get("candidates.type_1", c.candidates.type_1);
    t.get("candidates.type_2", c.candidates.type_2);
    t.get("candidates.minimal_only", c.candidates.minimal_only);
    t.get("candidates.negative_ratio", c.candidates.negative_ratio);
    t.get("features.hash_bits", c.features.hash_bits);
    t.get("train.lambda", c.train.lambda);
    t.get("train.grad_tolerance", c.train.grad_tolerance);
    t.get("train.max_iterations", c.train.max_iterations);
    t.get("train.history", c.train.history);
    std::int64_t n_paths = static_cast<std::int64_t>(c.n_paths);
    t.get("run.n_paths", n_paths);
    if (n_paths < 1) throw ValidationError("run.n_paths must be >= 1");
    c.n_paths = static_cast<std::size_t>(n_paths);
    t.get("run.folds", c.folds);
    std::uint64_t seed = 0;
    t.get("run.seed", seed);
    c.set_seed(seed);
    c.validate();
    return c;
  }
};

/// Parses an edge-kind toggle such as "dep+adj+nextsent" or "all".
inline GraphConfig parse_edge_toggle(const std::string &spec, GraphConfig base) {
  base.dependency = base.adjacency = base.nextsent = base.discourse = base.coref = false;
  if (spec == "all") {
    base.dependency = base.adjacency = base.nextsent = base.discourse = base.coref = true;
    return base;
  }
  for (const std::string &part : split(spec, '+')) {
    if (part == "dep") base.dependency = true;
    else if (part == "adj") base.adjacency = true;
    else if (part == "nextsent") base.nextsent = true;
    else if (part == "disc") base.discourse = true;
    else if (part == "coref") base.coref = true;
    else throw ValidationError("unknown edge kind '" + part + "' in toggle '" + spec + "'");
  }
  base.validate();
  return base;
}

}  // namespace dsrex

#endif  // DSREX_CONFIG_HPP
