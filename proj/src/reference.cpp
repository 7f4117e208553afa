#include "kgmat/reference.hpp"

namespace kgmat::reference {

Materialization materialize_naive(Graph g, const TBox& tbox, const std::array<Rule, kRuleCount>& order) {
  MaterializationReport report;
  report.total_before = g.triple_count();
  report.tbox_axioms = {tbox.subproperty.size(), tbox.inverse.size(), tbox.transitive.size(),
                        tbox.symmetric.size()};
  for (;;) {
    std::array<std::vector<Triple>, kRuleCount> derived;
    for (Rule r : order) derived[static_cast<std::size_t>(r)] = apply_rule(r, g, tbox);
    std::size_t added = 0;
    for (Rule r : order) {
      for (const auto& t : derived[static_cast<std::size_t>(r)]) {
        if (g.add(t)) {
          ++report.added_by_rule[static_cast<std::size_t>(r)];
          ++added;
        }
      }
    }
    if (added == 0) break;
    report.per_iteration_added.push_back(added);
    report.added_total += added;
    ++report.iterations;
  }
  report.total_after = g.triple_count();
  return {std::move(g), std::move(report)};
}

WalkCorpus generate_walks_serial(const Graph& g, const WalkConfig& cfg) {
  cfg.validate();
  if (g.entity_count() == 0) throw EmptyGraphError();
  WalkCorpus corpus;
  corpus.config = cfg;
  corpus.graph_fingerprint = g.fingerprint();
  std::vector<std::uint32_t> buf;
  for (EntityId e = 0; e < g.entity_count(); ++e) {
    if (g.out_edges(e).empty()) continue;
    for (std::uint32_t w = 0; w < cfg.walks_per_node; ++w) {
      draw_walk(g, e, cfg.depth, walk_stream_seed(cfg.seed, e, w), buf);
      corpus.append(buf);
    }
  }
  return corpus;
}

}  // namespace kgmat::reference
