#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "kgmat/analyzer.hpp"
#include "kgmat/graph.hpp"
#include "kgmat/pipeline.hpp"
#include "test_util.hpp"

using namespace kgmat;
using namespace kgmat::cli;
using kgmat::testing::read_file;
using kgmat::testing::scratch_dir;
using kgmat::testing::write_file;

namespace {

const fs::path kToy = fs::path(KGMAT_DATA_DIR) / "toy";

std::map<std::string, std::string> artifacts(const fs::path& manifest) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(manifest));
  std::string line;
  while (std::getline(in, line))
    if (line.starts_with("artifact=")) {
      const auto rest = line.substr(9);
      const auto sp = rest.find(' ');
      out[rest.substr(0, sp)] = rest.substr(sp + 1);
    }
  return out;
}

std::string kv(const std::string& text, const std::string& key) {
  const auto pos = text.find("\n" + key + "=");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

PipelineConfig toy_config(const std::string& conf, const fs::path& out) {
  auto cfg = load_pipeline_config(kToy / conf);
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST(PipelineConfigParse, SectionsAndPaths) {
  std::istringstream in(
      "# comment\n[pipeline]\ngraph = g.nt\ntbox = /abs/t.nt\nseed = 9\n\n[walk]\nwalks = 7\ndepth = 3\n"
      "[train]\ndim = 16\ndeterministic = true\nlr = 0.05\n; other comment\n[eval]\nfolds = 4\n"
      "docsim = d.tsv\n[compare]\ntop_k = 5\n");
  const auto cfg = parse_pipeline_config(in, "/base");
  EXPECT_EQ(cfg.graph, fs::path("/base/g.nt"));
  EXPECT_EQ(*cfg.tbox, fs::path("/abs/t.nt"));
  EXPECT_EQ(cfg.global_seed, 9u);
  EXPECT_EQ(cfg.walk.walks_per_node, 7u);
  EXPECT_EQ(cfg.walk.depth, 3u);
  EXPECT_EQ(cfg.train.dimension, 16u);
  EXPECT_TRUE(cfg.train.deterministic);
  EXPECT_DOUBLE_EQ(cfg.train.initial_learning_rate, 0.05);
  EXPECT_EQ(cfg.folds, 4u);
  EXPECT_EQ(cfg.top_k, 5u);
  ASSERT_EQ(cfg.datasets.size(), 1u);
  EXPECT_EQ(cfg.datasets[0].first, "docsim");
}

TEST(PipelineConfigParse, Rejections) {
  for (const char* text : {"[walk]\nspeed = 3\n", "[walk\n", "[walk]\nwalks = many\n", "[eval]\nsentiment = x.tsv\n",
                           "[train]\ndeterministic = perhaps\n", "novalue\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_pipeline_config(in, "."), UsageError) << text;
  }
  EXPECT_THROW(load_pipeline_config("/nonexistent/x.conf"), UsageError);
}

TEST(StageSeeds, DerivedAndOverridable) {
  PipelineConfig cfg;
  cfg.global_seed = 42;
  EXPECT_EQ(cfg.effective_walk_seed(), stage_seed(42, "walk"));
  EXPECT_NE(cfg.effective_walk_seed(), cfg.effective_train_seed());
  EXPECT_NE(cfg.effective_train_seed(), cfg.effective_eval_seed());
  EXPECT_NE(stage_seed(42, "walk"), stage_seed(43, "walk"));
  cfg.walk_seed = 5;
  EXPECT_EQ(cfg.effective_walk_seed(), 5u);
}

TEST(RunGuarded, ExitCodes) {
  EXPECT_EQ(run_guarded([] {}), 0);
  EXPECT_EQ(run_guarded([] { throw UsageError("x"); }), 2);
  EXPECT_EQ(run_guarded([] { throw ParseError(ParseError::Kind::MalformedTriple, 3, 1, "bad"); }), 2);
  EXPECT_EQ(run_guarded([] { throw DatasetError("x"); }), 2);
  EXPECT_EQ(run_guarded([] { throw std::runtime_error("disk full"); }), 1);
}

TEST(Pipeline, MissingDatasetIsUsageError) {
  auto cfg = toy_config("pipeline.conf", scratch_dir("pipeline_missing"));
  cfg.datasets.emplace_back("docsim", kToy / "does_not_exist.tsv");
  EXPECT_THROW(cfg.validate(), UsageError);
  EXPECT_THROW(cmd_pipeline(cfg), UsageError);
}

class ToyPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    first_ = new fs::path(cmd_pipeline(toy_config("pipeline.conf", scratch_dir("pipeline_a"))));
    second_ = new fs::path(cmd_pipeline(toy_config("pipeline.conf", scratch_dir("pipeline_b"))));
  }
  static void TearDownTestSuite() {
    delete first_;
    delete second_;
  }
  static fs::path* first_;
  static fs::path* second_;
};
fs::path* ToyPipeline::first_ = nullptr;
fs::path* ToyPipeline::second_ = nullptr;

TEST_F(ToyPipeline, ManifestListsHashedArtifacts) {
  const auto a = artifacts(*first_);
  EXPECT_GE(a.size(), 8u);
  for (const auto& [name, hash] : a) {
    const auto path = first_->parent_path() / name;
    ASSERT_TRUE(fs::exists(path)) << name;
    EXPECT_EQ(file_hash(path), hash) << name;
  }
  const auto text = read_file(*first_);
  EXPECT_NE(text.find("seed.walk="), std::string::npos);
  EXPECT_NE(text.find("input.graph="), std::string::npos);
}

TEST_F(ToyPipeline, RerunIsByteIdentical) { EXPECT_EQ(artifacts(*first_), artifacts(*second_)); }

TEST_F(ToyPipeline, EnrichmentShiftsDistribution) {
  const auto cmp = read_file(first_->parent_path() / "compare.txt");
  EXPECT_LT(std::stod(kv(cmp, "correlation")), 1.0);
  const auto report = read_file(first_->parent_path() / "materialization_report.txt");
  EXPECT_NE(kv(report, "added_total"), "0");
  // materialized output is a superset of the input graph
  const auto original = parse_graph_file((kToy / "graph.nt").string());
  const auto enriched = parse_graph_file((first_->parent_path() / "materialized.nt").string());
  const auto big = kgmat::testing::iri_set(enriched);
  for (const auto& t : kgmat::testing::iri_set(original)) EXPECT_TRUE(big.contains(t));
}

TEST_F(ToyPipeline, EvalReportsForEveryTask) {
  for (auto task : kEvalTasks)
    for (const char* variant : {"original", "enriched"}) {
      const auto p = first_->parent_path() / ("eval_" + std::string(task) + "_" + variant + ".txt");
      ASSERT_TRUE(fs::exists(p)) << p;
      EXPECT_EQ(kv(read_file(p), "dropped"), "0") << p;
    }
}

TEST(Pipeline, EmptyTBoxLeavesDistributionUnchanged) {
  const auto manifest = cmd_pipeline(toy_config("pipeline_empty_tbox.conf", scratch_dir("pipeline_empty")));
  const auto dir = manifest.parent_path();
  EXPECT_EQ(std::stod(kv(read_file(dir / "compare.txt"), "correlation")), 1.0);
  EXPECT_EQ(read_file(dir / "walks_original.txt"), read_file(dir / "walks_enriched.txt"));
}

TEST(Pipeline, SeedOverrideChangesWalks) {
  auto cfg = toy_config("pipeline.conf", scratch_dir("pipeline_seed"));
  cfg.datasets.clear();
  cfg.train.epochs = 1;
  cfg.global_seed = 7;
  const auto a = artifacts(cmd_pipeline(cfg));
  cfg.output_dir = scratch_dir("pipeline_seed2");
  cfg.global_seed = 8;
  const auto b = artifacts(cmd_pipeline(cfg));
  EXPECT_NE(a.at("walks_original.txt"), b.at("walks_original.txt"));
  EXPECT_EQ(a.at("materialized.nt"), b.at("materialized.nt"));
}

TEST(Commands, CompareWritesCsv) {
  const auto dir = scratch_dir("compare_cmd");
  WalkConfig wc;
  wc.walks_per_node = 5;
  cmd_compare(kToy / "graph.nt", kToy / "graph.nt", wc, 5, dir / "c.txt", dir / "c.csv");
  EXPECT_EQ(std::stod(kv(read_file(dir / "c.txt"), "correlation")), 1.0);
  EXPECT_TRUE(read_file(dir / "c.csv").starts_with("predicate,freq_original,freq_enriched\n"));
}
