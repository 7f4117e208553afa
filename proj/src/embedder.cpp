#include "kgmat/embedder.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <omp.h>

namespace kgmat {

void TrainConfig::validate() const {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (!(initial_learning_rate > 0)) throw std::invalid_argument("initial learning rate must be > 0");
  if (!(min_learning_rate >= 0) || min_learning_rate > initial_learning_rate)
    throw std::invalid_argument("min learning rate must lie in [0, initial learning rate]");
  if (!std::isfinite(unigram_exponent)) throw std::invalid_argument("unigram exponent must be finite");
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts)
    : tokens_(std::move(tokens)), counts_(std::move(counts)) {
  if (tokens_.size() != counts_.size()) throw std::invalid_argument("token/count size mismatch");
  index_.reserve(tokens_.size());
  for (std::uint32_t i = 0; i < tokens_.size(); ++i)
    if (!index_.emplace(tokens_[i], i).second) throw std::invalid_argument("duplicate token " + tokens_[i]);
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

Vocabulary build_vocab(const TokenSequences& corpus) {
  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& seq : corpus)
    for (const auto& tok : seq) ++counts[tok];
  if (counts.empty()) throw EmptyCorpusError();

  std::vector<std::pair<std::string_view, std::uint64_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> values;
  tokens.reserve(sorted.size());
  values.reserve(sorted.size());
  for (const auto& [tok, n] : sorted) {
    tokens.emplace_back(tok);
    values.push_back(n);
  }
  return Vocabulary(std::move(tokens), std::move(values));
}

std::vector<std::pair<std::size_t, std::size_t>> extract_pairs(std::size_t length, std::size_t window) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(length - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j)
      if (j != i) out.emplace_back(i, j);
  }
  return out;
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double exponent) {
  if (counts.empty()) throw std::invalid_argument("negative sampler needs a non-empty vocabulary");
  cumulative_.reserve(counts.size());
  double total = 0;
  for (auto c : counts) {
    total += std::pow(static_cast<double>(c), exponent);
    cumulative_.push_back(total);
  }
}

double NegativeSampler::probability(std::size_t i) const {
  const double lo = i == 0 ? 0.0 : cumulative_[i - 1];
  return (cumulative_[i] - lo) / cumulative_.back();
}

double pair_loss(std::span<const double> u, std::span<const double> v, std::span<const double> negatives) {
  const std::size_t dim = u.size();
  if (v.size() != dim || (dim && negatives.size() % dim != 0))
    throw std::invalid_argument("pair_loss: dimension mismatch");
  auto dot = [dim](const double* a, const double* b) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
  };
  double loss = neg_log_sigmoid(dot(u.data(), v.data()));
  for (std::size_t k = 0; dim && k < negatives.size() / dim; ++k)
    loss += neg_log_sigmoid(-dot(u.data(), negatives.data() + k * dim));
  return loss;
}

PairGradient pair_gradient(std::span<const double> u, std::span<const double> v,
                           std::span<const double> negatives) {
  const std::size_t dim = u.size();
  if (v.size() != dim || (dim && negatives.size() % dim != 0))
    throw std::invalid_argument("pair_gradient: dimension mismatch");
  std::vector<double> uu(u.begin(), u.end()), vv(v.begin(), v.end()), nn(negatives.begin(), negatives.end());
  std::vector<double*> rows;
  for (std::size_t k = 0; dim && k < nn.size() / dim; ++k) rows.push_back(nn.data() + k * dim);
  std::vector<double> scratch(dim);
  sgns_step<double>(uu.data(), vv.data(), rows, dim, 1.0, scratch.data());

  PairGradient g{std::vector<double>(dim), std::vector<double>(dim), std::vector<double>(nn.size())};
  for (std::size_t i = 0; i < dim; ++i) {
    g.du[i] = u[i] - uu[i];
    g.dv[i] = v[i] - vv[i];
  }
  for (std::size_t i = 0; i < nn.size(); ++i) g.dnegatives[i] = negatives[i] - nn[i];
  return g;
}

namespace {

struct EncodedCorpus {
  std::vector<std::uint32_t> ids;
  std::vector<std::size_t> offsets{0};
  std::size_t pairs_per_epoch = 0;
};

std::size_t pair_count(std::size_t length, std::size_t window) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < length; ++i) n += std::min(i, window) + std::min(length - 1 - i, window);
  return n;
}

EncodedCorpus encode(const TokenSequences& corpus, const Vocabulary& vocab, std::size_t window) {
  EncodedCorpus enc;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq) enc.ids.push_back(*vocab.find(tok));
    enc.offsets.push_back(enc.ids.size());
    enc.pairs_per_epoch += pair_count(seq.size(), window);
  }
  return enc;
}

class Trainer {
 public:
  Trainer(EmbeddingModel& m, const EncodedCorpus& enc)
      : m_(m),
        enc_(enc),
        cfg_(m.config),
        sampler_(m.vocab.counts(), cfg_.unigram_exponent),
        total_updates_(static_cast<double>(enc.pairs_per_epoch) * cfg_.epochs),
        // With a single token every draw would collide with the context.
        negatives_(m.vocab.size() > 1 ? cfg_.negatives : 0) {}

  double learning_rate(std::size_t done) const {
    const double progress = total_updates_ > 0 ? static_cast<double>(done) / total_updates_ : 0.0;
    const double lr = cfg_.initial_learning_rate -
                      (cfg_.initial_learning_rate - cfg_.min_learning_rate) * progress;
    return std::max(lr, cfg_.min_learning_rate);
  }

  /// Trains on one sequence; returns the summed pair loss.
  template <class Rng>
  double sequence(std::size_t s, Rng& rng, std::size_t updates_before, std::vector<float>& scratch,
                  std::vector<float*>& negs) {
    const std::size_t dim = m_.dimension;
    const std::size_t begin = enc_.offsets[s], end = enc_.offsets[s + 1];
    const std::size_t length = end - begin;
    const std::size_t window = cfg_.window;
    double loss = 0;
    std::size_t done = updates_before;
    for (std::size_t i = 0; i < length; ++i) {
      const std::uint32_t center = enc_.ids[begin + i];
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(length - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const std::uint32_t context = enc_.ids[begin + j];
        for (std::size_t k = 0; k < negatives_; ++k) {
          std::uint32_t n;
          do n = sampler_.draw(rng);
          while (n == context);
          negs[k] = m_.output.data() + n * dim;
        }
        loss += sgns_step<float>(m_.input.data() + center * dim, m_.output.data() + context * dim,
                                 std::span<float* const>(negs.data(), negatives_), dim, learning_rate(done),
                                 scratch.data());
        ++done;
      }
    }
    return loss;
  }

  void run() {
    const std::size_t n_seq = enc_.offsets.size() - 1;
    const std::size_t dim = m_.dimension;
    for (std::uint32_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
      const std::size_t epoch_base = static_cast<std::size_t>(epoch) * enc_.pairs_per_epoch;
      double loss = 0;
      if (cfg_.deterministic) {
        SplitMix64 rng(mix64(cfg_.seed ^ mix64(epoch + 1)));
        std::vector<float> scratch(dim);
        std::vector<float*> negs(negatives_);
        std::size_t done = epoch_base;
        for (std::size_t s = 0; s < n_seq; ++s) {
          loss += sequence(s, rng, done, scratch, negs);
          done += pair_count(enc_.offsets[s + 1] - enc_.offsets[s], cfg_.window);
        }
      } else {
        std::atomic<std::size_t> progress{epoch_base};
#pragma omp parallel reduction(+ : loss)
        {
          SplitMix64 rng(mix64(cfg_.seed ^ mix64(epoch + 1) ^ mix64(~static_cast<std::uint64_t>(omp_get_thread_num()))));
          std::vector<float> scratch(dim);
          std::vector<float*> negs(negatives_);
#pragma omp for schedule(dynamic, 64)
          for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n_seq); ++s) {
            const auto pairs = pair_count(enc_.offsets[s + 1] - enc_.offsets[s], cfg_.window);
            const auto done = progress.fetch_add(pairs, std::memory_order_relaxed);
            loss += sequence(static_cast<std::size_t>(s), rng, done, scratch, negs);
          }
        }
      }
      m_.epoch_loss.push_back(enc_.pairs_per_epoch ? loss / static_cast<double>(enc_.pairs_per_epoch) : 0.0);
    }
    if (!m_.epoch_loss.empty()) m_.final_loss = m_.epoch_loss.back();
  }

 private:
  EmbeddingModel& m_;
  const EncodedCorpus& enc_;
  const TrainConfig& cfg_;
  NegativeSampler sampler_;
  double total_updates_;
  std::size_t negatives_;
};

}  // namespace

EmbeddingModel train(const TokenSequences& corpus, const TrainConfig& cfg) {
  cfg.validate();
  EmbeddingModel m;
  m.config = cfg;
  m.vocab = build_vocab(corpus);
  m.dimension = cfg.dimension;
  const auto enc = encode(corpus, m.vocab, cfg.window);

  const std::size_t cells = m.vocab.size() * m.dimension;
  m.input.resize(cells);
  m.output.assign(cells, 0.0f);
  SplitMix64 init_rng(mix64(cfg.seed));
  const double half_range = 0.5 / static_cast<double>(cfg.dimension);
  for (auto& x : m.input) x = static_cast<float>((uniform_unit(init_rng) * 2.0 - 1.0) * half_range);

  Trainer(m, enc).run();
  return m;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double cosine(const EmbeddingModel& m, std::string_view a, std::string_view b) {
  auto va = m.find(a);
  if (!va) throw UnknownTokenError(std::string(a));
  auto vb = m.find(b);
  if (!vb) throw UnknownTokenError(std::string(b));
  return cosine(*va, *vb);
}

void write_embeddings(const EmbeddingModel& m, std::ostream& out) {
  out << m.vocab.size() << ' ' << m.dimension << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.vocab.size(); ++i) {
    out << m.vocab.token(i);
    for (float x : m.vector(i)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, end - buf);
    }
    out << '\n';
  }
}

void write_embeddings_file(const EmbeddingModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_embeddings(m, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingModel read_embeddings(std::istream& in) {
  std::string line;
  std::size_t size = 0, dim = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> size >> dim) || dim == 0)
    throw std::runtime_error("embedding file: bad header line");

  EmbeddingModel m;
  m.dimension = dim;
  m.input.reserve(size * dim);
  std::vector<std::string> tokens;
  tokens.reserve(size);
  while (tokens.size() < size && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* p = line.data();
    const char* end = p + line.size();
    const char* tok_end = std::find(p, end, ' ');
    tokens.emplace_back(p, tok_end);
    p = tok_end;
    for (std::size_t k = 0; k < dim; ++k) {
      while (p < end && *p == ' ') ++p;
      float x;
      auto [next, ec] = std::from_chars(p, end, x);
      if (ec != std::errc()) throw std::runtime_error("embedding file: bad value on line " + std::to_string(tokens.size() + 1));
      m.input.push_back(x);
      p = next;
    }
  }
  if (tokens.size() != size) throw std::runtime_error("embedding file: expected " + std::to_string(size) + " rows");
  m.vocab = Vocabulary(std::move(tokens), std::vector<std::uint64_t>(size, 0));
  m.config.dimension = static_cast<std::uint32_t>(dim);
  return m;
}

EmbeddingModel read_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_embeddings(in);
}

}  // namespace kgmat
