// Parallel kernels against their serial references.
//   build/bench/bench_kernels --benchmark_filter=Walks
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <map>
#include <sstream>
#include <string>

#include "kgmat/embedder.hpp"
#include "kgmat/materializer.hpp"
#include "kgmat/random.hpp"
#include "kgmat/reference.hpp"
#include "kgmat/walker.hpp"

namespace {

using namespace kgmat;

// Scale-free-ish random graph: n nodes, 6 predicates, ~4n edges, plus a T-box
// that exercises all four rules.
struct Workload {
  Graph graph;
  TBox tbox;
};

Workload make_workload(int nodes) {
  SplitMix64 rng(99);
  std::ostringstream text;
  const int edges = nodes * 4;
  for (int i = 0; i < edges; ++i) {
    const auto s = uniform_index(rng, nodes);
    // bias objects toward low ids so transitive chains get long
    const auto o = uniform_index(rng, 1 + uniform_index(rng, nodes));
    text << "<http://b/n" << s << "> <http://b/p" << uniform_index(rng, 6) << "> <http://b/n" << o << "> .\n";
  }
  std::istringstream in(text.str());
  Workload w{parse_graph(in), {}};
  std::istringstream axioms(
      "<http://b/p0> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#SymmetricProperty> .\n"
      "<http://b/p1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#TransitiveProperty> .\n"
      "<http://b/p2> <http://www.w3.org/2002/07/owl#inverseOf> <http://b/p3> .\n"
      "<http://b/p4> <http://www.w3.org/2000/01/rdf-schema#subPropertyOf> <http://b/p1> .\n");
  w.tbox = parse_tbox(axioms, w.graph);
  return w;
}

const Workload& workload(int nodes) {
  static std::map<int, Workload> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) it = cache.emplace(nodes, make_workload(nodes)).first;
  return it->second;
}

void BM_Materialize_SemiNaive(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(materialize(w.graph, w.tbox).report.added_total);
}

void BM_Materialize_NaiveReference(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::materialize_naive(w.graph, w.tbox).report.added_total);
}

WalkConfig walk_config() {
  WalkConfig cfg;
  cfg.walks_per_node = 50;
  cfg.depth = 4;
  return cfg;
}

void BM_Walks_Parallel(benchmark::State& state) {
  const auto& g = workload(static_cast<int>(state.range(0))).graph;
  for (auto _ : state) benchmark::DoNotOptimize(generate_walks(g, walk_config()).size());
  state.SetItemsProcessed(state.iterations() * g.entity_count() * walk_config().walks_per_node);
}

void BM_Walks_SerialReference(benchmark::State& state) {
  const auto& g = workload(static_cast<int>(state.range(0))).graph;
  for (auto _ : state) benchmark::DoNotOptimize(reference::generate_walks_serial(g, walk_config()).size());
  state.SetItemsProcessed(state.iterations() * g.entity_count() * walk_config().walks_per_node);
}

const TokenSequences& training_corpus() {
  static const TokenSequences corpus = [] {
    const auto& g = workload(2000).graph;
    WalkConfig cfg = walk_config();
    cfg.walks_per_node = 5;
    return corpus_to_token_sequences(generate_walks(g, cfg), g);
  }();
  return corpus;
}

void train_bench(benchmark::State& state, bool deterministic) {
  TrainConfig cfg;
  cfg.dimension = 64;
  cfg.epochs = 1;
  cfg.negatives = 5;
  cfg.deterministic = deterministic;
  for (auto _ : state) benchmark::DoNotOptimize(train(training_corpus(), cfg).final_loss);
}

void BM_Train_Hogwild(benchmark::State& state) { train_bench(state, false); }
void BM_Train_DeterministicSerial(benchmark::State& state) { train_bench(state, true); }

}  // namespace

BENCHMARK(BM_Materialize_SemiNaive)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Materialize_NaiveReference)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Walks_Parallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Walks_SerialReference)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Train_Hogwild)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Train_DeterministicSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
