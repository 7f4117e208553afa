#include <gtest/gtest.h>

#include <sstream>

#include "kgmat/analyzer.hpp"
#include "kgmat/materializer.hpp"
#include "kgmat/stats.hpp"
#include "test_util.hpp"

using namespace kgmat;
using namespace kgmat::testing;

namespace {

TokenSequences walks_with(const std::vector<std::vector<std::string>>& predicate_lists) {
  TokenSequences out;
  for (const auto& preds : predicate_lists) {
    auto& w = out.emplace_back();
    w.push_back("e0");
    for (std::size_t i = 0; i < preds.size(); ++i) {
      w.push_back(preds[i]);
      w.push_back("e" + std::to_string(i + 1));
    }
  }
  return out;
}

}  // namespace

TEST(PropertyDistributionTest, CountsTokensAndWalks) {
  const auto d = property_distribution(walks_with({{"p", "p", "q"}, {"q"}, {}}));
  EXPECT_EQ(d.total, 4u);
  EXPECT_EQ(d.walks, 3u);
  EXPECT_EQ(d.counts.at("p"), 2u);
  EXPECT_DOUBLE_EQ(d.frequency("q"), 0.5);
  EXPECT_DOUBLE_EQ(d.walk_share("p"), 1.0 / 3);
  EXPECT_DOUBLE_EQ(d.walk_share("q"), 2.0 / 3);
  EXPECT_EQ(d.frequency("none"), 0.0);
}

TEST(PropertyDistributionTest, CorpusAndTokenFormsAgree) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = graph_from(random_graph_text(rng, 15, 4, 40));
    if (g.triple_count() == 0) continue;
    WalkConfig cfg;
    cfg.walks_per_node = 5;
    cfg.depth = 3;
    cfg.seed = trial;
    const auto c = generate_walks(g, cfg);
    const auto a = property_distribution(c, g);
    const auto b = property_distribution(corpus_to_token_sequences(c, g));
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.walks_containing, b.walks_containing);
  }
}

TEST(TopK, OrderAndTies) {
  const auto d = property_distribution(walks_with({{"b", "a", "c", "c"}}));
  const auto top = top_k(d, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].first, "c");
  EXPECT_EQ(top[1].first, "a");  // tie with b broken by IRI
  EXPECT_DOUBLE_EQ(top[0].second, 0.5);
  EXPECT_EQ(top_k(d, 10).size(), 3u);
}

TEST(DistributionCorrelation, Cases) {
  const auto d = property_distribution(walks_with({{"p", "q", "q", "r"}}));
  EXPECT_EQ(distribution_correlation(d, d), 1.0);
  const auto x = property_distribution(walks_with({{"p"}}));
  const auto y = property_distribution(walks_with({{"q"}}));
  EXPECT_NEAR(distribution_correlation(x, y), -1.0, 1e-12);
  EXPECT_THROW(distribution_correlation(x, x), LengthMismatchError);
}

TEST(DistributionCorrelation, SymmetricAndBounded) {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    auto random_walks = [&] {
      std::vector<std::vector<std::string>> w(5);
      for (auto& preds : w)
        for (std::size_t i = 0, n = uniform_index(rng, 6); i < n; ++i) preds.push_back("p" + std::to_string(uniform_index(rng, 5)));
      return property_distribution(walks_with(w));
    };
    const auto a = random_walks(), b = random_walks();
    try {
      const double r = distribution_correlation(a, b);
      EXPECT_EQ(r, distribution_correlation(b, a));
      EXPECT_GE(r, -1.0);
      EXPECT_LE(r, 1.0);
    } catch (const LengthMismatchError&) {
    } catch (const ZeroVarianceError&) {
    }
  }
}

TEST(DegreeStatsTest, SubsetAndPredicate) {
  const auto g = graph_from(nt("http://e/a", "http://e/p", "http://e/b") + nt("http://e/a", "http://e/q", "http://e/c") +
                            nt("http://e/b", "http://e/p", "http://e/c"));
  const auto all = degree_stats(g);
  EXPECT_EQ(all.max, 2u);
  EXPECT_DOUBLE_EQ(all.mean, 1.0);
  EXPECT_DOUBLE_EQ(all.median, 1.0);
  const std::vector<std::string> sub{"http://e/a"};
  EXPECT_EQ(degree_stats(g, sub, "http://e/p").max, 1u);
  EXPECT_THROW(degree_stats(g, std::span<const std::string>{}), AnalysisError);
  const std::vector<std::string> ghost{"http://e/zz"};
  EXPECT_THROW(degree_stats(g, ghost), AnalysisError);
  EXPECT_THROW(degree_stats(g, std::nullopt, "http://e/zz"), AnalysisError);
}

TEST(SymmetryGapTest, SmallExample) {
  const std::string p = "http://e/p";
  const auto g = graph_from(nt("http://e/a", p, "http://e/b") + nt("http://e/b", p, "http://e/a") +
                            nt("http://e/c", p, "http://e/d"));
  const auto gap = symmetry_gap(g, p);
  EXPECT_EQ(gap.bidirectional_pairs, 1u);
  EXPECT_EQ(gap.one_directional, 1u);
  EXPECT_EQ(gap.completion_delta, 1u);
  EXPECT_THROW(symmetry_gap(g, "http://e/none"), AnalysisError);
}

TEST(SymmetryGapTest, ScaledSpouseFixture) {
  const auto g = spouse_fixture(98, 181);
  const auto gap = symmetry_gap(g, "http://ex.org/spouse");
  EXPECT_EQ(gap.bidirectional_pairs, 98u);
  EXPECT_EQ(gap.completion_delta, 181u);
  TBox t;
  t.symmetric.insert(*g.predicates().find("http://ex.org/spouse"));
  EXPECT_EQ(apply_symmetric(g, t).size(), 181u);
}

TEST(SymmetryGapTest, DeltaEqualsSymmetricStep) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = graph_from(random_graph_text(rng, 20, 3, 40));
    for (PredicateId p = 0; p < g.predicates().size(); ++p) {
      TBox t;
      t.symmetric.insert(p);
      EXPECT_EQ(symmetry_gap(g, std::string(g.predicates().text(p))).completion_delta, apply_symmetric(g, t).size());
    }
  }
}

TEST(CompareCorpora, IdenticalAndPlantedShift) {
  const auto base = property_distribution(walks_with({{"p", "q"}, {"r", "q"}, {"p"}}));
  const auto same = compare_corpora(base, base, 3);
  EXPECT_EQ(same.correlation, 1.0);
  EXPECT_EQ(same.top_original, same.top_enriched);
  EXPECT_DOUBLE_EQ(same.top3_share_original, 1.0);

  // Enrichment triples the occurrences of r: counts p2 q2 r1 become p2 q2 r3.
  const auto enriched = property_distribution(walks_with({{"p", "q"}, {"r", "q", "r", "r"}, {"p"}}));
  const auto c = compare_corpora(base, enriched, 1);
  EXPECT_EQ(c.top_enriched[0].first, "r");
  EXPECT_DOUBLE_EQ(c.top_enriched[0].second, 3.0 / 7);
  const std::vector<double> fo{0.4, 0.4, 0.2}, fe{2.0 / 7, 2.0 / 7, 3.0 / 7};
  EXPECT_NEAR(c.correlation, pearson(fo, fe), 1e-12);
  EXPECT_LT(c.correlation, 1.0);
  ASSERT_EQ(c.rows.size(), 3u);
  EXPECT_EQ(std::get<0>(c.rows[2]), "r");
  EXPECT_DOUBLE_EQ(std::get<2>(c.rows[2]), 3.0 / 7);

  std::ostringstream txt, csv;
  write_comparison(c, txt);
  write_comparison_csv(c, csv);
  EXPECT_NE(txt.str().find("correlation="), std::string::npos);
  EXPECT_TRUE(csv.str().starts_with("predicate,freq_original,freq_enriched\np,"));
}
