// kgmat: materialize -> walk -> train -> eval -> compare, one subcommand per stage.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kgmat/materializer.hpp"
#include "kgmat/pipeline.hpp"

namespace cli = kgmat::cli;

namespace {

void add_walk_flags(CLI::App* cmd, kgmat::WalkConfig& cfg) {
  cmd->add_option("--walks", cfg.walks_per_node, "Walks started from every entity")->capture_default_str();
  cmd->add_option("--depth", cfg.depth, "Hops per walk")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Walk RNG seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph materialization and RDF2vec embedding lab"};
  app.require_subcommand(1);

  std::string graph, tbox, out, report, corpus, embeddings, task, dataset, original, enriched, csv, config;
  kgmat::WalkConfig walk_cfg;
  kgmat::TrainConfig train_cfg;
  std::size_t folds = kgmat::kDefaultFolds;
  std::uint64_t eval_seed = 1;
  std::size_t top_k = 10;
  std::optional<std::uint64_t> pipeline_seed;

  auto* materialize = app.add_subcommand("materialize", "Saturate a graph under a T-box");
  materialize->add_option("--graph", graph, "Input triple file")->required();
  materialize->add_option("--tbox", tbox, "T-box axiom file");
  materialize->add_option("--out", out, "Materialized triple file")->required();
  materialize->add_option("--report", report, "Report file (default: <out>.report.txt)");

  auto* walk = app.add_subcommand("walk", "Generate a random-walk corpus");
  walk->add_option("--graph", graph, "Input triple file")->required();
  add_walk_flags(walk, walk_cfg);
  walk->add_option("--out", out, "Corpus file")->required();

  auto* train = app.add_subcommand("train", "Train skip-gram embeddings on a walk corpus");
  train->add_option("--corpus", corpus, "Walk corpus file")->required();
  train->add_option("--dim", train_cfg.dimension, "Embedding dimension")->capture_default_str();
  train->add_option("--window", train_cfg.window, "Context window")->capture_default_str();
  train->add_option("--epochs", train_cfg.epochs, "Passes over the corpus")->capture_default_str();
  train->add_option("--negatives", train_cfg.negatives, "Negative samples per pair")->capture_default_str();
  train->add_option("--lr", train_cfg.initial_learning_rate, "Initial learning rate")->capture_default_str();
  train->add_option("--min-lr", train_cfg.min_learning_rate, "Final learning rate")->capture_default_str();
  train->add_option("--seed", train_cfg.seed, "Training RNG seed")->capture_default_str();
  train->add_flag("--deterministic", train_cfg.deterministic, "Serial, bit-reproducible training");
  train->add_option("--out", out, "Embedding file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate embeddings on a downstream task");
  eval->add_option("--embeddings", embeddings, "Embedding file")->required();
  eval->add_option("--task", task, "classification | regression | similarity | relatedness | docsim")->required();
  eval->add_option("--dataset", dataset, "Dataset file (TSV)")->required();
  eval->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
  eval->add_option("--seed", eval_seed, "Fold assignment seed")->capture_default_str();
  eval->add_option("--out", out, "Report file")->required();

  auto* compare = app.add_subcommand("compare", "Compare predicate distributions of walks on two graphs");
  compare->add_option("--original", original, "Original triple file")->required();
  compare->add_option("--enriched", enriched, "Enriched triple file")->required();
  add_walk_flags(compare, walk_cfg);
  compare->add_option("--top-k", top_k, "Rows in the top-predicate tables")->capture_default_str();
  compare->add_option("--out", out, "Comparison report")->required();
  compare->add_option("--csv", csv, "Per-predicate frequency CSV");

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from a config file");
  pipeline->add_option("--config", config, "Pipeline config file")->required();
  pipeline->add_option("--out", out, "Output directory (overrides the config)");
  pipeline->add_option("--seed", pipeline_seed, "Global seed (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  return cli::run_guarded([&] {
    if (*materialize) {
      const auto report_path = report.empty() ? out + ".report.txt" : report;
      const auto r = cli::cmd_materialize(graph, tbox.empty() ? std::nullopt : std::optional<cli::fs::path>(tbox),
                                          out, report_path);
      kgmat::write_report_table(r, std::cout);
    } else if (*walk) {
      cli::cmd_walk(graph, walk_cfg, out);
    } else if (*train) {
      cli::cmd_train(corpus, train_cfg, out);
    } else if (*eval) {
      const auto r = cli::cmd_eval(embeddings, task, dataset, out, folds, eval_seed);
      kgmat::write_eval_report(r, std::cout);
    } else if (*compare) {
      cli::cmd_compare(original, enriched, walk_cfg, top_k, out,
                       csv.empty() ? std::nullopt : std::optional<cli::fs::path>(csv));
    } else if (*pipeline) {
      auto cfg = cli::load_pipeline_config(config);
      if (!out.empty()) cfg.output_dir = out;
      if (pipeline_seed) cfg.global_seed = *pipeline_seed;
      std::cout << cli::cmd_pipeline(cfg).string() << '\n';
    }
  });
}
