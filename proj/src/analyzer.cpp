#include "kgmat/analyzer.hpp"

#include <algorithm>
#include <iomanip>
#include <set>

#include "kgmat/stats.hpp"

namespace kgmat {

namespace {

template <class LengthOf, class PredicateAt>
PropertyDistribution count_predicates(std::size_t n_walks, LengthOf&& length_of, PredicateAt&& predicate_at) {
  PropertyDistribution d;
  d.walks = n_walks;
  std::set<std::string_view> seen;
  for (std::size_t w = 0; w < n_walks; ++w) {
    seen.clear();
    for (std::size_t j = 1; j < length_of(w); j += 2) {
      const std::string& p = predicate_at(w, j);
      ++d.counts[p];
      ++d.total;
      if (seen.insert(p).second) ++d.walks_containing[p];
    }
  }
  return d;
}

double top_share(const std::vector<std::pair<std::string, double>>& top, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < std::min(n, top.size()); ++i) s += top[i].second;
  return s;
}

}  // namespace

double PropertyDistribution::frequency(const std::string& predicate) const {
  auto it = counts.find(predicate);
  return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double PropertyDistribution::walk_share(const std::string& predicate) const {
  auto it = walks_containing.find(predicate);
  return it == walks_containing.end() || walks == 0 ? 0.0
                                                    : static_cast<double>(it->second) / static_cast<double>(walks);
}

PropertyDistribution property_distribution(const WalkCorpus& c, const Graph& g) {
  return count_predicates(
      c.size(), [&](std::size_t w) { return c.walk(w).size(); },
      [&](std::size_t w, std::size_t j) -> const std::string& { return g.predicates().text(c.walk(w)[j]); });
}

PropertyDistribution property_distribution(const TokenSequences& sequences) {
  return count_predicates(
      sequences.size(), [&](std::size_t w) { return sequences[w].size(); },
      [&](std::size_t w, std::size_t j) -> const std::string& { return sequences[w][j]; });
}

std::vector<std::pair<std::string, double>> top_k(const PropertyDistribution& d, std::size_t k) {
  std::vector<std::pair<std::string, std::uint64_t>> all(d.counts.begin(), d.counts.end());
  // counts is keyed by IRI, so a stable sort on count keeps IRI order on ties.
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i)
    out.emplace_back(all[i].first, static_cast<double>(all[i].second) / static_cast<double>(d.total));
  return out;
}

double distribution_correlation(const PropertyDistribution& a, const PropertyDistribution& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a.counts) keys.insert(k);
  for (const auto& [k, v] : b.counts) keys.insert(k);
  if (keys.size() < 2) throw LengthMismatchError();
  std::vector<double> fa, fb;
  for (const auto& k : keys) {
    fa.push_back(a.frequency(k));
    fb.push_back(b.frequency(k));
  }
  return pearson(fa, fb);
}

DegreeStats degree_stats(const Graph& g, std::optional<std::span<const std::string>> subset,
                         std::optional<std::string> predicate) {
  std::optional<PredicateId> pid;
  if (predicate) {
    pid = g.predicates().find(*predicate);
    if (!pid) throw AnalysisError("unknown predicate " + *predicate);
  }
  std::vector<EntityId> selected;
  if (subset) {
    if (subset->empty()) throw AnalysisError("empty entity subset");
    for (const auto& iri : *subset) {
      auto id = g.entities().find(iri);
      if (!id) throw AnalysisError("unknown entity " + iri);
      selected.push_back(*id);
    }
  } else {
    for (EntityId e = 0; e < g.entity_count(); ++e) selected.push_back(e);
  }

  DegreeStats st;
  std::vector<double> values;
  for (EntityId e : selected) {
    const auto edges = g.out_edges(e);
    const std::size_t d = pid ? static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(),
                                                                         [&](const Edge& x) { return x.predicate == *pid; }))
                              : edges.size();
    st.degrees.emplace_back(e, d);
    values.push_back(static_cast<double>(d));
    st.max = std::max(st.max, d);
  }
  st.mean = mean(values);
  st.median = median(values);
  return st;
}

SymmetryGap symmetry_gap(const Graph& g, const std::string& predicate) {
  const auto p = g.predicates().find(predicate);
  if (!p) throw AnalysisError("unknown predicate " + predicate);
  SymmetryGap gap{predicate};
  std::size_t mutual_edges = 0;
  for (EntityId x = 0; x < g.entity_count(); ++x) {
    for (const auto& e : g.out_edges(x)) {
      if (e.predicate != *p || e.object == x) continue;  // self-loops are their own reverse
      if (g.contains({e.object, *p, x}))
        ++mutual_edges;
      else
        ++gap.one_directional;
    }
  }
  gap.bidirectional_pairs = mutual_edges / 2;
  gap.completion_delta = gap.one_directional;
  return gap;
}

CorpusComparison compare_corpora(const PropertyDistribution& original, const PropertyDistribution& enriched,
                                 std::size_t k) {
  CorpusComparison c;
  c.top_original = top_k(original, k);
  c.top_enriched = top_k(enriched, k);
  c.correlation = distribution_correlation(original, enriched);
  c.top3_share_original = top_share(top_k(original, 3), 3);
  c.top3_share_enriched = top_share(top_k(enriched, 3), 3);
  std::set<std::string> keys;
  for (const auto& [key, v] : original.counts) keys.insert(key);
  for (const auto& [key, v] : enriched.counts) keys.insert(key);
  for (const auto& key : keys)
    c.rows.emplace_back(key, original.frequency(key), enriched.frequency(key), original.walk_share(key),
                        enriched.walk_share(key));
  return c;
}

void write_comparison(const CorpusComparison& c, std::ostream& out) {
  auto walk_share = [&](const std::string& key, bool enriched) {
    for (const auto& row : c.rows)
      if (std::get<0>(row) == key) return enriched ? std::get<4>(row) : std::get<3>(row);
    return 0.0;
  };
  auto table = [&](std::string_view title, const auto& top, bool enriched) {
    out << title << '\n';
    out << std::left << std::setw(60) << "predicate" << std::right << std::setw(12) << "token_freq" << std::setw(12)
        << "walk_share" << '\n';
    for (const auto& [p, f] : top)
      out << std::left << std::setw(60) << p << std::right << std::fixed << std::setprecision(4) << std::setw(12) << f
          << std::setw(12) << walk_share(p, enriched) << '\n';
    out.unsetf(std::ios::floatfield);
    out << '\n';
  };
  table("Top predicates (original)", c.top_original, false);
  table("Top predicates (enriched)", c.top_enriched, true);
  out << std::setprecision(17);
  out << "correlation=" << c.correlation << '\n';
  out << "top3_share_original=" << c.top3_share_original << '\n';
  out << "top3_share_enriched=" << c.top3_share_enriched << '\n';
}

void write_comparison_csv(const CorpusComparison& c, std::ostream& out) {
  out << "predicate,freq_original,freq_enriched\n" << std::setprecision(17);
  for (const auto& row : c.rows) out << std::get<0>(row) << ',' << std::get<1>(row) << ',' << std::get<2>(row) << '\n';
}

}  // namespace kgmat
