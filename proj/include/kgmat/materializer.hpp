#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include "kgmat/graph.hpp"

namespace kgmat {

enum class Rule : std::size_t { Subproperty = 0, Inverse = 1, Transitive = 2, Symmetric = 3 };

inline constexpr std::size_t kRuleCount = 4;
inline constexpr std::array<Rule, kRuleCount> kDefaultRuleOrder{Rule::Subproperty, Rule::Inverse,
                                                                 Rule::Transitive, Rule::Symmetric};

std::string_view rule_name(Rule r) noexcept;

struct MaterializationReport {
  std::size_t iterations = 0;  // productive iterations only
  std::array<std::size_t, kRuleCount> added_by_rule{};
  std::size_t added_total = 0;
  std::size_t total_before = 0;
  std::size_t total_after = 0;
  std::vector<std::size_t> per_iteration_added;
  std::array<std::size_t, kRuleCount> tbox_axioms{};

  std::size_t added(Rule r) const { return added_by_rule[static_cast<std::size_t>(r)]; }

  friend bool operator==(const MaterializationReport&, const MaterializationReport&) = default;
};

// One-step rule applications against the current graph. Each returns the
// sorted, duplicate-free set of triples the rule derives that are not yet in g.
std::vector<Triple> apply_symmetric(const Graph& g, const TBox& tbox);
std::vector<Triple> apply_transitive(const Graph& g, const TBox& tbox);
std::vector<Triple> apply_inverse(const Graph& g, const TBox& tbox);
std::vector<Triple> apply_subproperty(const Graph& g, const TBox& tbox);
std::vector<Triple> apply_rule(Rule r, const Graph& g, const TBox& tbox);

struct Materialization {
  Graph graph;
  MaterializationReport report;
};

/// Forward chaining to fixpoint. In each iteration all four rules read the
/// graph as it was when the iteration began; their outputs are merged in
/// `order`, and a triple derived by several rules is credited to the first.
/// Evaluation is semi-naive and rule kernels run in parallel over
/// predicates; the result (graph and report) equals
/// reference::materialize_naive.
Materialization materialize(Graph g, const TBox& tbox,
                            const std::array<Rule, kRuleCount>& order = kDefaultRuleOrder);

/// Aligned table in the layout of a dataset-size summary, one column.
void write_report_table(const MaterializationReport& r, std::ostream& out);
/// `key=value` lines.
void write_report_kv(const MaterializationReport& r, std::ostream& out);

}  // namespace kgmat
