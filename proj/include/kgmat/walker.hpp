#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kgmat/graph.hpp"

namespace kgmat {

struct WalkConfig {
  std::uint32_t walks_per_node = 500;
  std::uint32_t depth = 4;  // hops; a full walk has 2 * depth + 1 tokens
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const WalkConfig&, const WalkConfig&) = default;
};

/// Walks stored back to back. Walk i occupies tokens[offsets[i], offsets[i+1]);
/// even positions hold EntityIds, odd positions PredicateIds.
struct WalkCorpus {
  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> offsets{0};
  std::uint64_t graph_fingerprint = 0;
  WalkConfig config;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::span<const std::uint32_t> walk(std::size_t i) const {
    return std::span<const std::uint32_t>(tokens).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
  void append(std::span<const std::uint32_t> walk) {
    tokens.insert(tokens.end(), walk.begin(), walk.end());
    offsets.push_back(tokens.size());
  }

  friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;
};

class EmptyGraphError : public std::runtime_error {
 public:
  EmptyGraphError() : std::runtime_error("cannot generate walks on an empty graph") {}
};

/// Seed of the RNG stream that drives walk `walk_index` from `start`.
std::uint64_t walk_stream_seed(std::uint64_t seed, EntityId start, std::uint32_t walk_index) noexcept;

/// Draws one walk into `out` (cleared first). Shared by the parallel
/// generator and the serial reference.
void draw_walk(const Graph& g, EntityId start, std::uint32_t depth, std::uint64_t stream_seed,
               std::vector<std::uint32_t>& out);

/// Uniform random walks: walks_per_node walks from every entity with at
/// least one out-edge, ordered by start id then walk index. Parallel over
/// start entities; output is independent of the thread count.
WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg);

/// One token string sequence per walk, tokens rendered as IRIs.
std::vector<std::vector<std::string>> corpus_to_token_sequences(const WalkCorpus& c, const Graph& g);

std::string fingerprint_hex(std::uint64_t fp);

/// Header `# walks=<n> depth=<d> seed=<s> graph=<hex>` then one walk per line.
void write_corpus(const WalkCorpus& c, const Graph& g, std::ostream& out);
void write_corpus_file(const WalkCorpus& c, const Graph& g, const std::string& path);

struct CorpusFile {
  WalkConfig config;
  std::string graph_fingerprint;
  std::vector<std::vector<std::string>> sequences;
};

CorpusFile read_corpus(std::istream& in);
CorpusFile read_corpus_file(const std::string& path);

}  // namespace kgmat
