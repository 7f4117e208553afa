#include <gtest/gtest.h>

#include <omp.h>

#include <map>
#include <sstream>

#include "kgmat/reference.hpp"
#include "kgmat/walker.hpp"
#include "test_util.hpp"

using namespace kgmat;
using kgmat::testing::graph_from;

namespace {

std::string corpus_text(const WalkCorpus& c, const Graph& g) {
  std::ostringstream out;
  write_corpus(c, g, out);
  return out.str();
}

std::size_t entities_with_out_edges(const Graph& g) {
  std::size_t n = 0;
  for (EntityId e = 0; e < g.entity_count(); ++e) n += !g.out_edges(e).empty();
  return n;
}

}  // namespace

TEST(GenerateWalks, ChainIsDeterministic) {
  const auto g = graph_from("<a> <p> <b> .\n<b> <q> <c> .");
  for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
    const auto c = generate_walks(g, {20, 4, seed});
    const auto seqs = corpus_to_token_sequences(c, g);
    ASSERT_EQ(seqs.size(), 40u);  // a and b both start walks
    for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(seqs[i], (std::vector<std::string>{"a", "p", "b", "q", "c"}));
    for (std::size_t i = 20; i < 40; ++i) EXPECT_EQ(seqs[i], (std::vector<std::string>{"b", "q", "c"}));
  }
}

TEST(GenerateWalks, IsolatedNodeGivesEmptyCorpus) {
  Graph g;
  g.intern_entity("lonely");
  EXPECT_EQ(generate_walks(g, {500, 4, 1}).size(), 0u);
}

TEST(GenerateWalks, EmptyGraphRejected) { EXPECT_THROW(generate_walks(Graph{}, {10, 2, 1}), EmptyGraphError); }

TEST(GenerateWalks, ConfigValidated) {
  const auto g = graph_from("<a> <p> <b> .");
  EXPECT_THROW(generate_walks(g, {0, 4, 1}), std::invalid_argument);
  EXPECT_THROW(generate_walks(g, {1, 0, 1}), std::invalid_argument);
}

TEST(GenerateWalks, UniformOverTwoEdges) {
  // 10,000 fair draws: sd = 50, so [4700, 5300] is a 6-sigma band.
  const auto g = graph_from("<a> <p> <b> .\n<a> <q> <c> .");
  const auto c = generate_walks(g, {10000, 1, 42});
  std::map<std::uint32_t, int> hits;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.walk(i)[0] == *g.entities().find("a")) ++hits[c.walk(i)[1]];
  ASSERT_EQ(hits.size(), 2u);
  for (const auto& [pred, n] : hits) {
    EXPECT_GE(n, 4700);
    EXPECT_LE(n, 5300);
  }
}

TEST(GenerateWalks, EdgeValidityAndCount) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = graph_from(kgmat::testing::random_graph_text(rng, 25, 4, 60));
    if (g.entity_count() == 0) continue;
    const WalkConfig cfg{7, 1 + static_cast<std::uint32_t>(uniform_index(rng, 8)), rng()};
    const auto c = generate_walks(g, cfg);
    EXPECT_EQ(c.size(), cfg.walks_per_node * entities_with_out_edges(g));
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto w = c.walk(i);
      ASSERT_EQ(w.size() % 2, 1u);
      ASSERT_LE(w.size(), 2 * cfg.depth + 1);
      for (std::size_t j = 0; j + 2 < w.size(); j += 2) ASSERT_TRUE(g.contains({w[j], w[j + 1], w[j + 2]}));
      // Short walks stop only at sinks.
      if (w.size() < 2 * cfg.depth + 1) EXPECT_TRUE(g.out_edges(w.back()).empty());
    }
  }
}

TEST(GenerateWalks, MatchesSerialReferenceAcrossThreadCounts) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = graph_from(kgmat::testing::random_graph_text(rng, 30, 4, 90));
    const WalkConfig cfg{25, 4, 1000u + trial};
    const auto serial = reference::generate_walks_serial(g, cfg);
    for (int threads : {1, 3, 8}) {
      omp_set_num_threads(threads);
      EXPECT_EQ(generate_walks(g, cfg), serial) << "threads=" << threads;
    }
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST(GenerateWalks, ReproducibleFileAndSeedSensitive) {
  const auto g = graph_from("<a> <p> <b> .\n<a> <p> <c> .\n<b> <q> <a> .\n<c> <q> <a> .\n<c> <r> <b> .");
  const auto first = corpus_text(generate_walks(g, {50, 4, 7}), g);
  EXPECT_EQ(first, corpus_text(generate_walks(g, {50, 4, 7}), g));
  const auto other = generate_walks(g, {50, 4, 8});
  EXPECT_NE(first, corpus_text(other, g));
  EXPECT_EQ(other.size(), generate_walks(g, {50, 4, 7}).size());
}

TEST(CorpusToTokenSequences, EmptyAndSingle) {
  const auto g = graph_from("<a> <p> <b> .");
  WalkCorpus empty;
  EXPECT_TRUE(corpus_to_token_sequences(empty, g).empty());
  const auto c = generate_walks(g, {1, 3, 1});
  const auto seqs = corpus_to_token_sequences(c, g);
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0], (std::vector<std::string>{"a", "p", "b"}));
}

TEST(CorpusToTokenSequences, CountMatchesCorpus) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = graph_from(kgmat::testing::random_graph_text(rng, 20, 3, 40));
    if (g.entity_count() == 0) continue;
    const auto c = generate_walks(g, {3, 3, rng()});
    EXPECT_EQ(corpus_to_token_sequences(c, g).size(), c.size());
  }
}

TEST(CorpusFile, HeaderAndRoundTrip) {
  const auto g = graph_from("<a> <p> <b> .\n<b> <q> <a> .");
  const auto c = generate_walks(g, {3, 2, 77});
  const auto text = corpus_text(c, g);
  EXPECT_TRUE(text.starts_with("# walks=3 depth=2 seed=77 graph=" + fingerprint_hex(g.fingerprint()) + "\n"));
  std::istringstream in(text);
  const auto file = read_corpus(in);
  EXPECT_EQ(file.config, (WalkConfig{3, 2, 77}));
  EXPECT_EQ(file.graph_fingerprint, fingerprint_hex(g.fingerprint()));
  EXPECT_EQ(file.sequences, corpus_to_token_sequences(c, g));
}

TEST(Fingerprint, HexIsSixteenDigits) {
  EXPECT_EQ(fingerprint_hex(0), "0000000000000000");
  EXPECT_EQ(fingerprint_hex(0xabcULL), "0000000000000abc");
}
