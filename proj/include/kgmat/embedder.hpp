#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgmat/random.hpp"

namespace kgmat {

using TokenSequences = std::vector<std::vector<std::string>>;

class EmptyCorpusError : public std::runtime_error {
 public:
  EmptyCorpusError() : std::runtime_error("corpus contains no tokens") {}
};

class UnknownTokenError : public std::runtime_error {
 public:
  explicit UnknownTokenError(const std::string& token) : std::runtime_error("unknown token: " + token) {}
};

struct TrainConfig {
  std::uint32_t dimension = 200;
  std::uint32_t window = 5;
  std::uint32_t epochs = 10;
  std::uint32_t negatives = 25;
  double initial_learning_rate = 0.025;
  double min_learning_rate = 1e-4;
  double unigram_exponent = 0.75;
  std::uint64_t seed = 1;
  bool deterministic = false;  // serial, bit-reproducible updates

  void validate() const;
};

/// Tokens ordered by descending count, then lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::optional<std::uint32_t> find(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
};

/// Every distinct token with its occurrence count; no minimum count.
Vocabulary build_vocab(const TokenSequences& corpus);

/// (center, context) position pairs with |i - j| <= window, i != j, in
/// center-major order.
std::vector<std::pair<std::size_t, std::size_t>> extract_pairs(std::size_t length, std::size_t window);

/// Samples from counts^exponent, normalised.
class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::uint64_t> counts, double exponent);

  template <class Rng>
  std::uint32_t draw(Rng& rng) const {
    const double u = uniform_unit(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

  double probability(std::size_t i) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

/// -log(sigmoid(x)), stable for large |x|.
inline double neg_log_sigmoid(double x) noexcept {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) noexcept {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// One SGNS step on a (center, context, negatives) instance.
///
/// Loss L = -log s(u.v) - sum_k log s(-u.n_k). All gradients come from the
/// pre-step values, so the update is exactly u -= lr dL/du etc.; repeated
/// negative rows accumulate. Returns L before the step.
template <class Real>
double sgns_step(Real* u, Real* v, std::span<Real* const> negatives, std::size_t dim, double lr,
                 Real* scratch) {
  auto dot = [dim](const Real* a, const Real* b) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
  };

  const double pos = dot(u, v);
  double loss = neg_log_sigmoid(pos);
  const double g_pos = sigmoid(pos) - 1.0;  // dL/d(u.v)

  // dL/du accumulates into scratch.
  for (std::size_t i = 0; i < dim; ++i) scratch[i] = static_cast<Real>(g_pos * v[i]);

  // Scores first, so every negative sees the same u and the same n_k.
  double g_neg_buf[64];
  std::vector<double> g_neg_heap;
  double* g_neg = g_neg_buf;
  if (negatives.size() > 64) {
    g_neg_heap.resize(negatives.size());
    g_neg = g_neg_heap.data();
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double s = dot(u, negatives[k]);
    loss += neg_log_sigmoid(-s);
    g_neg[k] = sigmoid(s);  // dL/d(u.n_k)
    for (std::size_t i = 0; i < dim; ++i) scratch[i] += static_cast<Real>(g_neg[k] * negatives[k][i]);
  }

  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double step = -lr * g_neg[k];
    for (std::size_t i = 0; i < dim; ++i) negatives[k][i] += static_cast<Real>(step * u[i]);
  }
  const double step_v = -lr * g_pos;
  for (std::size_t i = 0; i < dim; ++i) v[i] += static_cast<Real>(step_v * u[i]);
  for (std::size_t i = 0; i < dim; ++i) u[i] -= static_cast<Real>(lr * scratch[i]);
  return loss;
}

/// SGNS loss; negatives is a k x dim row-major block.
double pair_loss(std::span<const double> u, std::span<const double> v, std::span<const double> negatives);

struct PairGradient {
  std::vector<double> du, dv, dnegatives;
};

/// Analytic gradient of pair_loss, read off one sgns_step with lr = 1.
PairGradient pair_gradient(std::span<const double> u, std::span<const double> v,
                           std::span<const double> negatives);

struct EmbeddingModel {
  Vocabulary vocab;
  std::size_t dimension = 0;
  std::vector<float> input;   // |V| x dim, the published embeddings
  std::vector<float> output;  // |V| x dim context vectors; empty when loaded from file
  TrainConfig config;
  std::vector<double> epoch_loss;  // mean pair loss per epoch
  double final_loss = 0.0;

  std::span<const float> vector(std::size_t index) const {
    return std::span<const float>(input).subspan(index * dimension, dimension);
  }
  std::optional<std::span<const float>> find(std::string_view token) const {
    if (auto i = vocab.find(token)) return vector(*i);
    return std::nullopt;
  }
};

EmbeddingModel train(const TokenSequences& corpus, const TrainConfig& cfg);

/// Cosine over input vectors; 0 when either norm is zero.
double cosine(const EmbeddingModel& m, std::string_view a, std::string_view b);
double cosine(std::span<const float> a, std::span<const float> b);

void write_embeddings(const EmbeddingModel& m, std::ostream& out);
void write_embeddings_file(const EmbeddingModel& m, const std::string& path);
EmbeddingModel read_embeddings(std::istream& in);
EmbeddingModel read_embeddings_file(const std::string& path);

}  // namespace kgmat
