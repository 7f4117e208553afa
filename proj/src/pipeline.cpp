#include "kgmat/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "kgmat/analyzer.hpp"
#include "kgmat/datasets.hpp"
#include "kgmat/graph.hpp"

namespace kgmat::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw UsageError("config: bad value for '" + key + "': " + value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("config: bad boolean for '" + key + "': " + value);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void require_file(const fs::path& p, std::string_view what) {
  if (!fs::is_regular_file(p)) throw UsageError(std::string(what) + " not found: " + p.string());
}

bool is_ranking_task(std::string_view task) { return task == "similarity" || task == "relatedness"; }

void require_task(std::string_view task) {
  for (auto t : kEvalTasks)
    if (t == task) return;
  throw UsageError("unknown task '" + std::string(task) +
                   "' (expected classification, regression, similarity, relatedness or docsim)");
}

EvalReport evaluate(const EmbeddingModel& model, std::string_view task, const fs::path& dataset, std::size_t folds,
                    std::uint64_t seed) {
  require_task(task);
  EvalReport report;
  if (task == "classification")
    report = run_classification(model, read_labeled_dataset_file(dataset.string()), folds, seed);
  else if (task == "regression")
    report = run_regression(model, read_regression_dataset_file(dataset.string()), folds, seed);
  else if (is_ranking_task(task))
    report = run_entity_ranking(model, read_ranking_dataset_file(dataset.string()));
  else
    report = run_docsim(model, read_docsim_dataset_file(dataset.string()));
  report.task = std::string(task);
  if (report.dropped)
    std::clog << "kgmat: " << task << ": dropped " << report.dropped << " entities without embeddings\n";
  return report;
}

void write_report(const EvalReport& report, const fs::path& out) {
  auto f = open_output(out);
  write_eval_report(report, f);
}

void write_materialization(const Materialization& m, const fs::path& graph_out, const fs::path& report_out) {
  write_graph_file(m.graph, graph_out.string());
  auto f = open_output(report_out);
  write_report_table(m.report, f);
  f << '\n';
  write_report_kv(m.report, f);
}

void write_comparison_files(const CorpusComparison& c, const fs::path& out, const std::optional<fs::path>& csv) {
  {
    auto f = open_output(out);
    write_comparison(c, f);
  }
  if (csv) {
    auto f = open_output(*csv);
    write_comparison_csv(c, f);
  }
}

}  // namespace

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kSuccess;
  } catch (const UsageError& e) {
    std::cerr << "kgmat: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    std::cerr << "kgmat: parse error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DatasetError& e) {
    std::cerr << "kgmat: dataset error: " << e.what() << '\n';
    return kUsageError;
  } catch (const EmptyCorpusError& e) {
    std::cerr << "kgmat: " << e.what() << '\n';
    return kUsageError;
  } catch (const EmptyGraphError& e) {
    std::cerr << "kgmat: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kgmat: invalid argument: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "kgmat: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) noexcept {
  return global_seed ^ fnv1a64(stage);
}

void PipelineConfig::validate() const {
  if (graph.empty()) throw UsageError("config: no graph given");
  require_file(graph, "graph file");
  if (tbox) require_file(*tbox, "tbox file");
  for (const auto& [task, path] : datasets) {
    require_task(task);
    require_file(path, task + " dataset");
  }
  try {
    walk.validate();
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (folds < 2) throw UsageError("config: folds must be >= 2");
}

PipelineConfig parse_pipeline_config(std::istream& in, const fs::path& base_dir) {
  PipelineConfig cfg;
  auto path = [&](const std::string& v) {
    fs::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  std::string section, line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw UsageError("config line " + std::to_string(number) + ": bad section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(number) + ": expected key = value");
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    const auto qualified = section + "." + key;

    if (qualified == "pipeline.graph") cfg.graph = path(value);
    else if (qualified == "pipeline.tbox") cfg.tbox = path(value);
    else if (qualified == "pipeline.output") cfg.output_dir = path(value);
    else if (qualified == "pipeline.seed") cfg.global_seed = parse_number<std::uint64_t>(key, value);
    else if (qualified == "walk.walks") cfg.walk.walks_per_node = parse_number<std::uint32_t>(key, value);
    else if (qualified == "walk.depth") cfg.walk.depth = parse_number<std::uint32_t>(key, value);
    else if (qualified == "walk.seed") cfg.walk_seed = parse_number<std::uint64_t>(key, value);
    else if (qualified == "train.dim") cfg.train.dimension = parse_number<std::uint32_t>(key, value);
    else if (qualified == "train.window") cfg.train.window = parse_number<std::uint32_t>(key, value);
    else if (qualified == "train.epochs") cfg.train.epochs = parse_number<std::uint32_t>(key, value);
    else if (qualified == "train.negatives") cfg.train.negatives = parse_number<std::uint32_t>(key, value);
    else if (qualified == "train.lr") cfg.train.initial_learning_rate = parse_number<double>(key, value);
    else if (qualified == "train.min_lr") cfg.train.min_learning_rate = parse_number<double>(key, value);
    else if (qualified == "train.unigram_exponent") cfg.train.unigram_exponent = parse_number<double>(key, value);
    else if (qualified == "train.deterministic") cfg.train.deterministic = parse_bool(key, value);
    else if (qualified == "train.seed") cfg.train_seed = parse_number<std::uint64_t>(key, value);
    else if (qualified == "eval.folds") cfg.folds = parse_number<std::size_t>(key, value);
    else if (qualified == "eval.seed") cfg.eval_seed = parse_number<std::uint64_t>(key, value);
    else if (section == "eval") {
      require_task(key);
      cfg.datasets.emplace_back(key, path(value));
    } else if (qualified == "compare.top_k") cfg.top_k = parse_number<std::size_t>(key, value);
    else throw UsageError("config line " + std::to_string(number) + ": unknown key '" + qualified + "'");
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  return parse_pipeline_config(in, path.parent_path());
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::uint64_t h = fnv1a64("");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h = fnv1a64(std::string_view(buf, in.gcount()), h);
  return fingerprint_hex(h);
}

MaterializationReport cmd_materialize(const fs::path& graph, const std::optional<fs::path>& tbox,
                                      const fs::path& out, const fs::path& report) {
  require_file(graph, "graph file");
  if (tbox) require_file(*tbox, "tbox file");
  auto g = parse_graph_file(graph.string());
  TBox axioms;
  if (tbox) axioms = parse_tbox_file(tbox->string(), g);
  const auto m = materialize(std::move(g), axioms);
  write_materialization(m, out, report);
  return m.report;
}

void cmd_walk(const fs::path& graph, const WalkConfig& cfg, const fs::path& out) {
  require_file(graph, "graph file");
  const auto g = parse_graph_file(graph.string());
  const auto corpus = generate_walks(g, cfg);
  auto f = open_output(out);
  write_corpus(corpus, g, f);
}

void cmd_train(const fs::path& corpus, const TrainConfig& cfg, const fs::path& out) {
  require_file(corpus, "walk corpus");
  const auto file = read_corpus_file(corpus.string());
  const auto model = train(file.sequences, cfg);
  auto f = open_output(out);
  write_embeddings(model, f);
}

EvalReport cmd_eval(const fs::path& embeddings, std::string_view task, const fs::path& dataset, const fs::path& out,
                    std::size_t folds, std::uint64_t seed) {
  require_task(task);
  require_file(embeddings, "embedding file");
  require_file(dataset, "dataset");
  const auto model = read_embeddings_file(embeddings.string());
  auto report = evaluate(model, task, dataset, folds, seed);
  report.model = embeddings.filename().string();
  write_report(report, out);
  return report;
}

void cmd_compare(const fs::path& original, const fs::path& enriched, const WalkConfig& cfg, std::size_t top_k,
                 const fs::path& out, const std::optional<fs::path>& csv) {
  require_file(original, "original graph");
  require_file(enriched, "enriched graph");
  const auto g0 = parse_graph_file(original.string());
  const auto g1 = parse_graph_file(enriched.string());
  const auto d0 = property_distribution(generate_walks(g0, cfg), g0);
  const auto d1 = property_distribution(generate_walks(g1, cfg), g1);
  write_comparison_files(compare_corpora(d0, d1, top_k), out, csv);
}

fs::path cmd_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const auto& dir = cfg.output_dir;
  WalkConfig walk_cfg = cfg.walk;
  walk_cfg.seed = cfg.effective_walk_seed();
  TrainConfig train_cfg = cfg.train;
  train_cfg.seed = cfg.effective_train_seed();
  fs::create_directories(dir);
  std::vector<std::string> artifacts;
  auto artifact = [&](const std::string& name) {
    artifacts.push_back(name);
    return dir / name;
  };

  // Both graphs share one dictionary, so equal graphs give equal walks.
  auto original = parse_graph_file(cfg.graph.string());
  TBox tbox;
  if (cfg.tbox) tbox = parse_tbox_file(cfg.tbox->string(), original);
  const auto enriched = materialize(original, tbox);
  write_materialization(enriched, artifact("materialized.nt"), artifact("materialization_report.txt"));

  struct Variant {
    std::string name;
    const Graph* graph;
  };
  const Variant variants[] = {{"original", &original}, {"enriched", &enriched.graph}};
  std::vector<PropertyDistribution> distributions;
  const auto eval_seed = cfg.effective_eval_seed();
  for (const auto& v : variants) {
    const auto corpus = generate_walks(*v.graph, walk_cfg);
    write_corpus_file(corpus, *v.graph, artifact("walks_" + v.name + ".txt").string());
    distributions.push_back(property_distribution(corpus, *v.graph));

    const auto model = train(corpus_to_token_sequences(corpus, *v.graph), train_cfg);
    write_embeddings_file(model, artifact("embeddings_" + v.name + ".txt").string());

    std::map<std::string, int> seen;
    for (const auto& [task, path] : cfg.datasets) {
      auto report = evaluate(model, task, path, cfg.folds, eval_seed);
      report.model = "embeddings_" + v.name;
      const int n = seen[task]++;
      write_report(report, artifact("eval_" + task + (n ? "_" + std::to_string(n) : "") + "_" + v.name + ".txt"));
    }
  }
  write_comparison_files(compare_corpora(distributions[0], distributions[1], cfg.top_k), artifact("compare.txt"),
                         artifact("compare.csv"));

  const auto manifest = dir / "manifest.txt";
  auto f = open_output(manifest);
  f << "# kgmat pipeline manifest\n";
  f << "input.graph=" << cfg.graph.string() << ' ' << file_hash(cfg.graph) << '\n';
  if (cfg.tbox) f << "input.tbox=" << cfg.tbox->string() << ' ' << file_hash(*cfg.tbox) << '\n';
  for (const auto& [task, path] : cfg.datasets)
    f << "input." << task << '=' << path.string() << ' ' << file_hash(path) << '\n';
  f << "seed.global=" << cfg.global_seed << '\n';
  f << "seed.walk=" << walk_cfg.seed << '\n';
  f << "seed.train=" << train_cfg.seed << '\n';
  f << "seed.eval=" << eval_seed << '\n';
  f << "walk.walks=" << cfg.walk.walks_per_node << "\nwalk.depth=" << cfg.walk.depth << '\n';
  f << "train.dim=" << cfg.train.dimension << "\ntrain.window=" << cfg.train.window
    << "\ntrain.epochs=" << cfg.train.epochs << "\ntrain.negatives=" << cfg.train.negatives
    << "\ntrain.deterministic=" << (cfg.train.deterministic ? "true" : "false") << '\n';
  for (const auto& name : artifacts) f << "artifact=" << name << ' ' << file_hash(dir / name) << '\n';
  return manifest;
}

}  // namespace kgmat::cli
