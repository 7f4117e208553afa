#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// textbook definitions directly and exist so tests and benchmarks can check
// the fast paths against them.

#include "kgmat/materializer.hpp"
#include "kgmat/walker.hpp"

namespace kgmat::reference {

/// Naive fixpoint: every iteration re-evaluates each rule over the whole graph.
Materialization materialize_naive(Graph g, const TBox& tbox,
                                  const std::array<Rule, kRuleCount>& order = kDefaultRuleOrder);

/// Single-threaded walk generation with the same per-walk RNG streams.
WalkCorpus generate_walks_serial(const Graph& g, const WalkConfig& cfg);

}  // namespace kgmat::reference
