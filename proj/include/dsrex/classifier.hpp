#ifndef DSREX_CLASSIFIER_HPP
#define DSREX_CLASSIFIER_HPP

// Binary logistic regression over hashed binary features.
//
//   f(w, b) = -sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)] + lambda/2 |w|^2
//   p_i     = sigmoid(w . x_i + b)
//
// The bias is not penalized. Training runs L-BFGS over the features that
// actually occur in the training set; every other weight has zero gradient
// at w = 0 and stays there, so the dense model is the compact optimum
// scattered back into the 2^b space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsrex/common.hpp"
#include "dsrex/features.hpp"

namespace dsrex {

inline constexpr double kProbClamp = 1e-12;

struct TrainConfig {
  double lambda = 1.0;
  double grad_tolerance = 1e-6;  // infinity norm
  int max_iterations = 500;
  int history = 10;
  std::uint64_t seed = 0;  // weights start at zero; kept for config fingerprints

  void validate() const {
    if (!(lambda >= 0.0)) throw ValidationError("train.lambda must be >= 0");
    if (!(grad_tolerance > 0.0)) throw ValidationError("train.grad_tolerance must be positive");
    if (max_iterations < 1) throw ValidationError("train.max_iterations must be >= 1");
    if (history < 1) throw ValidationError("train.history must be >= 1");
  }
};

struct ModelMetadata {
  std::uint32_t iterations = 0;
  double final_objective = 0.0;
  double grad_inf_norm = 0.0;
  std::uint64_t fingerprint = 0;  // featurization config digest
  bool operator==(const ModelMetadata &) const = default;
};

struct Model {
  int hash_bits = 22;
  double lambda = 1.0;
  double bias = 0.0;
  std::vector<double> weights;  // size 2^hash_bits
  ModelMetadata meta;

  static Model zeros(int hash_bits, double lambda = 1.0) {
    Model m;
    m.hash_bits = hash_bits;
    m.lambda = lambda;
    m.weights.assign(std::size_t{1} << hash_bits, 0.0);
    return m;
  }

  std::size_t dimension() const { return std::size_t{1} << hash_bits; }
  bool operator==(const Model &) const = default;
};

struct LabeledExample {
  FeatureVector x;
  int y = 0;  // 0 or 1
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace detail {

// log(sigmoid(z)), clamped below at log(kProbClamp).
inline double log_sigmoid(double z) {
  double v = z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
  return std::max(v, std::log(kProbClamp));
}

inline double example_loss(double z, int y) { return y ? -log_sigmoid(z) : -log_sigmoid(-z); }

}  // namespace detail

struct ObjectiveResult {
  double objective = 0.0;
  std::vector<double> gradient;  // size 2^b
  double bias_gradient = 0.0;
};

/// Objective and gradient at `model` over the full 2^b space.
inline ObjectiveResult objective_and_gradient(const Model &model, std::span<const LabeledExample> examples) {
  if (examples.empty()) throw std::invalid_argument("objective_and_gradient: no examples");
  ObjectiveResult r;
  r.gradient.assign(model.weights.size(), 0.0);
  for (const auto &ex : examples) {
    double z = model.bias;
    for (auto i : ex.x.indices) z += model.weights[i];
    r.objective += detail::example_loss(z, ex.y);
    double resid = sigmoid(z) - ex.y;
    for (auto i : ex.x.indices) r.gradient[i] += resid;
    r.bias_gradient += resid;
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    sq += model.weights[i] * model.weights[i];
    r.gradient[i] += model.lambda * model.weights[i];
  }
  r.objective += 0.5 * model.lambda * sq;
  return r;
}

inline double predict(const Model &model, const FeatureVector &x) {
  if (x.hash_bits != model.hash_bits)
    throw std::invalid_argument("predict: feature vector has " + std::to_string(x.hash_bits) +
                                " hash bits, model has " + std::to_string(model.hash_bits));
  double z = model.bias;
  for (auto i : x.indices) {
    if (i >= model.weights.size()) throw std::out_of_range("predict: feature index out of range");
    z += model.weights[i];
  }
  return sigmoid(z);
}

namespace detail {

// Training set re-indexed onto the features it uses. Parameter vector is
// [w_0 .. w_{D-1}, bias].
class CompactProblem {
 public:
  CompactProblem(std::span<const LabeledExample> examples, std::span<const std::size_t> subset, double lambda)
      : lambda_(lambda) {
    std::vector<std::uint32_t> used;
    for (std::size_t k : subset) {
      const auto &idx = examples[k].x.indices;
      used.insert(used.end(), idx.begin(), idx.end());
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    features_ = std::move(used);
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    remap.reserve(features_.size() * 2);
    for (std::uint32_t c = 0; c < features_.size(); ++c) remap.emplace(features_[c], c);
    row_start_.push_back(0);
    for (std::size_t k : subset) {
      for (auto i : examples[k].x.indices) cols_.push_back(remap.at(i));
      row_start_.push_back(cols_.size());
      labels_.push_back(examples[k].y);
    }
  }

  std::size_t dim() const { return features_.size() + 1; }
  const std::vector<std::uint32_t> &features() const { return features_; }

  double evaluate(const std::vector<double> &theta, std::vector<double> &grad) const {
    const std::size_t d = features_.size();
    grad.assign(theta.size(), 0.0);
    double f = 0.0;
    for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
      double z = theta[d];
      for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) z += theta[cols_[k]];
      f += example_loss(z, labels_[r]);
      double resid = sigmoid(z) - labels_[r];
      for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) grad[cols_[k]] += resid;
      grad[d] += resid;
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      sq += theta[j] * theta[j];
      grad[j] += lambda_ * theta[j];
    }
    return f + 0.5 * lambda_ * sq;
  }

 private:
  double lambda_;
  std::vector<std::uint32_t> features_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<int> labels_;
};

inline double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const std::vector<double> &a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct LbfgsResult {
  std::vector<double> theta;
  double objective = 0.0;
  double grad_inf_norm = 0.0;
  int iterations = 0;
};

// Limited-memory BFGS with backtracking line search. Near the optimum the
// objective differences drop below rounding, so a step is also accepted
// when f does not increase beyond a relative epsilon and the gradient
// shrinks.
inline LbfgsResult lbfgs(const CompactProblem &prob, const TrainConfig &cfg) {
  const std::size_t n = prob.dim();
  LbfgsResult res;
  res.theta.assign(n, 0.0);
  std::vector<double> g, g_new, d(n), x_new(n);
  double f = prob.evaluate(res.theta, g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(static_cast<std::size_t>(cfg.history));

  int iter = 0;
  bool reset_once = false;
  while (inf_norm(g) > cfg.grad_tolerance && iter < cfg.max_iterations) {
    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (m > 0) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    else gamma = 1.0 / std::max(1.0, inf_norm(g));
    for (std::size_t i = 0; i < n; ++i) d[i] *= gamma;
    for (std::size_t k = 0; k < m; ++k) {
      double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    double gd = dot(g, d);
    if (!(gd < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(1.0, inf_norm(g));
      gd = dot(g, d);
    }

    double step = 1.0;
    bool accepted = false;
    double f_new = f;
    const double g_norm = inf_norm(g);
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.theta[i] + step * d[i];
      f_new = prob.evaluate(x_new, g_new);
      if (std::isfinite(f_new)) {
        const bool armijo = f_new <= f + 1e-4 * step * gd;
        const bool flat = f_new <= f + 1e-12 * (1.0 + std::abs(f)) && inf_norm(g_new) < g_norm;
        if (armijo || flat) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (s_hist.empty() || reset_once) break;  // no progress possible
      reset_once = true;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    reset_once = false;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - res.theta[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (s_hist.size() == static_cast<std::size_t>(cfg.history)) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    res.theta.swap(x_new);
    g.swap(g_new);
    f = f_new;
    ++iter;
  }
  res.objective = f;
  res.grad_inf_norm = inf_norm(g);
  res.iterations = iter;
  return res;
}

}  // namespace detail

/// Trains on examples[subset]. Deterministic for fixed inputs.
inline Model train(std::span<const LabeledExample> examples, std::span<const std::size_t> subset,
                   const TrainConfig &cfg, int hash_bits) {
  cfg.validate();
  bool has_pos = false, has_neg = false;
  for (std::size_t k : subset) {
    if (examples[k].x.hash_bits != hash_bits) throw std::invalid_argument("train: hash_bits mismatch");
    (examples[k].y ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw DataError("degenerate training set: both labels are required");

  detail::CompactProblem prob(examples, subset, cfg.lambda);
  auto res = detail::lbfgs(prob, cfg);

  Model model = Model::zeros(hash_bits, cfg.lambda);
  const auto &feats = prob.features();
  for (std::size_t c = 0; c < feats.size(); ++c) model.weights[feats[c]] = res.theta[c];
  model.bias = res.theta.back();
  model.meta.iterations = static_cast<std::uint32_t>(res.iterations);
  model.meta.final_objective = res.objective;
  model.meta.grad_inf_norm = res.grad_inf_norm;
  return model;
}

inline Model train(std::span<const LabeledExample> examples, const TrainConfig &cfg, int hash_bits) {
  std::vector<std::size_t> all(examples.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return train(examples, all, cfg, hash_bits);
}

// ---------------------------------------------------------------------------
// Model file:
//   "DSXM" | u32 version | u32 hash_bits | f64 lambda | f64 bias |
//   f64[2^hash_bits] weights | u32 iterations | f64 final objective |
//   f64 gradient inf-norm | u64 fingerprint | u32 CRC32 of all prior bytes
// All little-endian.

inline constexpr std::uint32_t kModelVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void raw(const char *p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, sizeof v);
    u64(v);
  }
  std::vector<unsigned char> &bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> b) : b_(b) {}
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{b_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b_[pos_++]} << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, sizeof d);
    return d;
  }

 private:
  std::span<const unsigned char> b_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> encode_model(const Model &m) {
  detail::ByteWriter w;
  w.raw("DSXM", 4);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(m.hash_bits));
  w.f64(m.lambda);
  w.f64(m.bias);
  for (double x : m.weights) w.f64(x);
  w.u32(m.meta.iterations);
  w.f64(m.meta.final_objective);
  w.f64(m.meta.grad_inf_norm);
  w.u64(m.meta.fingerprint);
  w.u32(crc32(w.bytes()));
  return std::move(w.bytes());
}

inline Model decode_model(std::span<const unsigned char> bytes) {
  constexpr std::size_t kHeader = 4 + 4 + 4 + 8 + 8;
  constexpr std::size_t kTrailer = 4 + 8 + 8 + 8 + 4;
  if (bytes.size() < kHeader + kTrailer) throw FormatError("model checksum failure: file truncated");
  if (std::memcmp(bytes.data(), "DSXM", 4) != 0) throw FormatError("not a model file (bad magic)");
  detail::ByteReader r(bytes.subspan(4));
  const std::uint32_t version = r.u32();
  if (version != kModelVersion)
    throw FormatError("unsupported model version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelVersion) + ")");
  const std::uint32_t bits = r.u32();
  if (bits < 1 || bits > 30) throw FormatError("model hash_bits out of range");
  const std::size_t expected = kHeader + (std::size_t{8} << bits) + kTrailer;
  if (bytes.size() != expected) throw FormatError("model checksum failure: size mismatch");
  detail::ByteReader tail(bytes.subspan(bytes.size() - 4));
  if (tail.u32() != crc32(bytes.first(bytes.size() - 4))) throw FormatError("model checksum failure: CRC mismatch");

  Model m;
  m.hash_bits = static_cast<int>(bits);
  m.lambda = r.f64();
  m.bias = r.f64();
  m.weights.resize(std::size_t{1} << bits);
  for (double &x : m.weights) x = r.f64();
  m.meta.iterations = r.u32();
  m.meta.final_objective = r.f64();
  m.meta.grad_inf_norm = r.f64();
  m.meta.fingerprint = r.u64();
  return m;
}

inline void save_model(const Model &m, const std::string &path) {
  auto bytes = encode_model(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model file: " + path);
}

inline Model load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_model(bytes);
}

}  // namespace dsrex

#endif  // DSREX_CLASSIFIER_HPP
