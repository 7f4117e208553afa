#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kgmat/embedder.hpp"
#include "kgmat/graph.hpp"
#include "kgmat/walker.hpp"

namespace kgmat {

/// Predicate occurrence counts in a walk corpus, keyed by predicate IRI so
/// corpora over differently-encoded graphs align.
struct PropertyDistribution {
  std::map<std::string, std::uint64_t> counts;  // token-level
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> walks_containing;  // walk-level
  std::uint64_t walks = 0;

  double frequency(const std::string& predicate) const;
  /// Fraction of walks that contain the predicate at least once.
  double walk_share(const std::string& predicate) const;
};

PropertyDistribution property_distribution(const WalkCorpus& c, const Graph& g);
/// Same, over token sequences; predicates sit at odd positions.
PropertyDistribution property_distribution(const TokenSequences& sequences);

/// The k most frequent predicates, descending, ties by IRI ascending.
std::vector<std::pair<std::string, double>> top_k(const PropertyDistribution& d, std::size_t k);

/// Pearson correlation of relative frequencies aligned on the key union
/// (absent keys count as 0).
double distribution_correlation(const PropertyDistribution& a, const PropertyDistribution& b);

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DegreeStats {
  std::vector<std::pair<EntityId, std::size_t>> degrees;
  double mean = 0;
  double median = 0;
  std::size_t max = 0;
};

/// Out-degree statistics over `subset` (all entities when empty), counting
/// only `predicate` edges when given. Unknown IRIs and an explicitly empty
/// selection throw AnalysisError.
DegreeStats degree_stats(const Graph& g, std::optional<std::span<const std::string>> subset = std::nullopt,
                         std::optional<std::string> predicate = std::nullopt);

struct SymmetryGap {
  std::string predicate;
  std::size_t bidirectional_pairs = 0;
  std::size_t one_directional = 0;
  std::size_t completion_delta = 0;
};

SymmetryGap symmetry_gap(const Graph& g, const std::string& predicate);

struct CorpusComparison {
  std::vector<std::pair<std::string, double>> top_original;
  std::vector<std::pair<std::string, double>> top_enriched;
  double correlation = 0;
  double top3_share_original = 0;
  double top3_share_enriched = 0;
  /// (predicate, freq original, freq enriched, walk share original, walk
  /// share enriched) over the key union.
  std::vector<std::tuple<std::string, double, double, double, double>> rows;
};

CorpusComparison compare_corpora(const PropertyDistribution& original, const PropertyDistribution& enriched,
                                 std::size_t k);

void write_comparison(const CorpusComparison& c, std::ostream& out);
void write_comparison_csv(const CorpusComparison& c, std::ostream& out);

}  // namespace kgmat
