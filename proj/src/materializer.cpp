#include "kgmat/materializer.hpp"

#include <algorithm>
#include <iomanip>
#include <stdexcept>
#include <unordered_map>

#include <omp.h>

namespace kgmat {

namespace {

void sort_unique(std::vector<Triple>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Triple> triples_with(const Graph& g, PredicateId p) {
  std::vector<Triple> out;
  for (EntityId s = 0; s < g.entity_count(); ++s)
    for (const auto& e : g.out_edges(s))
      if (e.predicate == p) out.push_back({s, p, e.object});
  return out;
}

std::array<std::size_t, kRuleCount> count_axioms(const TBox& t) {
  return {t.subproperty.size(), t.inverse.size(), t.transitive.size(), t.symmetric.size()};
}

// Per-predicate append-only edge log with dense join indexes. Positions in
// `log` let each rule remember how much of a predicate it has already consumed.
// Materialization never creates entities, so the indexes are sized once.
struct PredicateIndex {
  std::vector<std::pair<EntityId, EntityId>> log;
  std::vector<std::vector<EntityId>> out;
  std::vector<std::vector<EntityId>> in;

  explicit PredicateIndex(std::size_t entities = 0) : out(entities), in(entities) {}

  void push(EntityId s, EntityId o) {
    log.emplace_back(s, o);
    out[s].push_back(o);
    in[o].push_back(s);
  }
};

class SemiNaiveEngine {
 public:
  SemiNaiveEngine(Graph& g, const TBox& tbox)
      : g_(g), tbox_(tbox), index_(g.predicates().size(), PredicateIndex(g.entity_count())) {
    marks_.assign(index_.size(), 0);
    for (const auto& t : g.sorted_triples()) index_[t.predicate].push(t.subject, t.object);
  }

  /// One iteration: every rule reads the graph as it stood when the
  /// iteration began, joining only against edges added since the previous
  /// iteration began. Outputs are inserted in `order`; a triple derived by
  /// several rules counts for the first. Returns the per-rule additions.
  std::array<std::size_t, kRuleCount> iterate(const std::array<Rule, kRuleCount>& order) {
    std::vector<std::size_t> snapshot(index_.size());
    for (std::size_t p = 0; p < index_.size(); ++p) snapshot[p] = index_[p].log.size();

    std::array<std::vector<Triple>, kRuleCount> derived;
    for (Rule r : order) derived[static_cast<std::size_t>(r)] = derive(r);
    marks_ = std::move(snapshot);

    std::array<std::size_t, kRuleCount> added{};
    for (Rule r : order) {
      for (const auto& t : derived[static_cast<std::size_t>(r)]) {
        if (g_.add(t)) {
          index_[t.predicate].push(t.subject, t.object);
          ++added[static_cast<std::size_t>(r)];
        }
      }
    }
    return added;
  }

 private:
  using Delta = std::span<const std::pair<EntityId, EntityId>>;

  // Edges of p that arrived during the previous iteration (all of them on
  // the first). derive() runs before any insertion, so the log still ends
  // at this iteration's snapshot.
  Delta delta(PredicateId p) const {
    const auto& log = index_[p].log;
    return Delta(log).subspan(marks_[p]);
  }

  // Each task is a unit of independent work; results are merged in task order.
  template <class Task, class Body>
  std::vector<Triple> parallel_derive(const std::vector<Task>& tasks, Body&& body) const {
    std::vector<std::vector<Triple>> partial(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
      auto& local = partial[i];
      body(tasks[i], local);
      std::erase_if(local, [&](const Triple& t) { return g_.contains(t); });
      sort_unique(local);
    }
    std::vector<Triple> out;
    for (auto& part : partial) out.insert(out.end(), part.begin(), part.end());
    sort_unique(out);
    return out;
  }

  std::vector<Triple> derive(Rule r) const {
    switch (r) {
      case Rule::Subproperty: {
        std::vector<std::pair<PredicateId, PredicateId>> tasks(tbox_.subproperty.begin(),
                                                               tbox_.subproperty.end());
        return parallel_derive(tasks, [&](const auto& pq, std::vector<Triple>& out) {
          for (const auto& [x, y] : delta(pq.first)) out.push_back({x, pq.second, y});
        });
      }
      case Rule::Inverse: {
        std::vector<std::pair<PredicateId, PredicateId>> tasks(tbox_.inverse.begin(), tbox_.inverse.end());
        return parallel_derive(tasks, [&](const auto& pq, std::vector<Triple>& out) {
          const auto [p, q] = pq;
          for (const auto& [x, y] : delta(p)) out.push_back({y, q, x});
          for (const auto& [x, y] : delta(q)) out.push_back({y, p, x});
        });
      }
      case Rule::Transitive: {
        std::vector<Triple> out;
        for (PredicateId p : tbox_.transitive) {
          auto part = derive_transitive(p);
          out.insert(out.end(), part.begin(), part.end());
        }
        sort_unique(out);
        return out;
      }
      case Rule::Symmetric: {
        std::vector<PredicateId> tasks(tbox_.symmetric.begin(), tbox_.symmetric.end());
        return parallel_derive(tasks, [&](PredicateId p, std::vector<Triple>& out) {
          for (const auto& [x, y] : delta(p)) out.push_back({y, p, x});
        });
      }
    }
    return {};
  }

  // Every (x, p, z) with x -p-> y -p-> z where at least one hop is new. Work
  // is grouped by x so a stamp array can drop both duplicates and triples
  // already present without touching the triple hash set.
  std::vector<Triple> derive_transitive(PredicateId p) const {
    const auto& idx = index_[p];
    const auto d = delta(p);
    if (d.empty()) return {};
    const std::size_t n = idx.out.size();

    std::vector<std::vector<EntityId>> delta_out(n);
    std::vector<EntityId> sources;
    for (const auto& [x, y] : d) {
      if (delta_out[x].empty()) sources.push_back(x);
      delta_out[x].push_back(y);
    }
    // x reaching a delta source y through an existing edge also joins.
    std::vector<char> is_source(n, 0);
    for (EntityId x : sources) is_source[x] = 1;
    const std::size_t direct = sources.size();
    for (std::size_t i = 0; i < direct; ++i)
      for (EntityId x : idx.in[sources[i]])
        if (!is_source[x]) {
          is_source[x] = 1;
          sources.push_back(x);
        }

    std::vector<Triple> out;
#pragma omp parallel
    {
      std::vector<std::uint32_t> stamp(n, 0);
      std::uint32_t epoch = 0;
      std::vector<Triple> local;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sources.size()); ++i) {
        const EntityId x = sources[i];
        ++epoch;
        for (EntityId z : idx.out[x]) stamp[z] = epoch;
        auto emit = [&](EntityId z) {
          if (stamp[z] == epoch) return;
          stamp[z] = epoch;
          local.push_back({x, p, z});
        };
        for (EntityId y : delta_out[x])
          for (EntityId z : idx.out[y]) emit(z);
        for (EntityId y : idx.out[x])
          for (EntityId z : delta_out[y]) emit(z);
      }
#pragma omp critical
      out.insert(out.end(), local.begin(), local.end());
    }
    return out;
  }

  Graph& g_;
  const TBox& tbox_;
  std::vector<PredicateIndex> index_;
  std::vector<std::size_t> marks_;
};

void validate_tbox(const Graph& g, const TBox& tbox) {
  const auto n = g.predicates().size();
  auto known = [n](PredicateId p) { return p < n; };
  bool ok = std::all_of(tbox.symmetric.begin(), tbox.symmetric.end(), known) &&
            std::all_of(tbox.transitive.begin(), tbox.transitive.end(), known);
  for (const auto& [a, b] : tbox.inverse) ok = ok && known(a) && known(b);
  for (const auto& [a, b] : tbox.subproperty) ok = ok && known(a) && known(b);
  if (!ok) throw std::invalid_argument("T-box references a predicate not registered in the graph");
}

}  // namespace

std::string_view rule_name(Rule r) noexcept {
  switch (r) {
    case Rule::Subproperty: return "subproperty";
    case Rule::Inverse: return "inverse";
    case Rule::Transitive: return "transitive";
    case Rule::Symmetric: return "symmetric";
  }
  return "?";
}

std::vector<Triple> apply_symmetric(const Graph& g, const TBox& tbox) {
  std::vector<Triple> out;
  for (PredicateId p : tbox.symmetric)
    for (const auto& t : triples_with(g, p))
      if (Triple r{t.object, p, t.subject}; !g.contains(r)) out.push_back(r);
  sort_unique(out);
  return out;
}

std::vector<Triple> apply_transitive(const Graph& g, const TBox& tbox) {
  std::vector<Triple> out;
  for (PredicateId p : tbox.transitive) {
    for (const auto& t : triples_with(g, p))
      for (const auto& e : g.out_edges(t.object))
        if (e.predicate == p)
          if (Triple r{t.subject, p, e.object}; !g.contains(r)) out.push_back(r);
  }
  sort_unique(out);
  return out;
}

std::vector<Triple> apply_inverse(const Graph& g, const TBox& tbox) {
  std::vector<Triple> out;
  for (const auto& [p, q] : tbox.inverse) {
    for (const auto& t : triples_with(g, p))
      if (Triple r{t.object, q, t.subject}; !g.contains(r)) out.push_back(r);
    for (const auto& t : triples_with(g, q))
      if (Triple r{t.object, p, t.subject}; !g.contains(r)) out.push_back(r);
  }
  sort_unique(out);
  return out;
}

std::vector<Triple> apply_subproperty(const Graph& g, const TBox& tbox) {
  std::vector<Triple> out;
  for (const auto& [sub, super] : tbox.subproperty)
    for (const auto& t : triples_with(g, sub))
      if (Triple r{t.subject, super, t.object}; !g.contains(r)) out.push_back(r);
  sort_unique(out);
  return out;
}

std::vector<Triple> apply_rule(Rule r, const Graph& g, const TBox& tbox) {
  switch (r) {
    case Rule::Subproperty: return apply_subproperty(g, tbox);
    case Rule::Inverse: return apply_inverse(g, tbox);
    case Rule::Transitive: return apply_transitive(g, tbox);
    case Rule::Symmetric: return apply_symmetric(g, tbox);
  }
  return {};
}

Materialization materialize(Graph g, const TBox& tbox, const std::array<Rule, kRuleCount>& order) {
  MaterializationReport report;
  report.total_before = g.triple_count();
  report.tbox_axioms = count_axioms(tbox);
  validate_tbox(g, tbox);

  if (!tbox.empty()) {
    SemiNaiveEngine engine(g, tbox);
    for (;;) {
      const auto added = engine.iterate(order);
      std::size_t added_this_iteration = 0;
      for (std::size_t r = 0; r < kRuleCount; ++r) {
        report.added_by_rule[r] += added[r];
        added_this_iteration += added[r];
      }
      if (added_this_iteration == 0) break;
      report.per_iteration_added.push_back(added_this_iteration);
      report.added_total += added_this_iteration;
      ++report.iterations;
    }
  }
  report.total_after = g.triple_count();
  return {std::move(g), std::move(report)};
}

void write_report_table(const MaterializationReport& r, std::ostream& out) {
  auto row = [&](std::string_view label, std::size_t value) {
    out << std::left << std::setw(32) << label << std::right << std::setw(14) << value << '\n';
  };
  row("T-box subproperties", r.tbox_axioms[0]);
  row("T-box inverse properties", r.tbox_axioms[1]);
  row("T-box transitive properties", r.tbox_axioms[2]);
  row("T-box symmetric properties", r.tbox_axioms[3]);
  out << std::string(46, '-') << '\n';
  row("A-box subproperties", r.added(Rule::Subproperty));
  row("A-box inverse properties", r.added(Rule::Inverse));
  row("A-box transitive properties", r.added(Rule::Transitive));
  row("A-box symmetric properties", r.added(Rule::Symmetric));
  out << std::string(46, '-') << '\n';
  row("No. of added triples", r.added_total);
  row("No. of total triples", r.total_after);
  row("Iterations", r.iterations);
}

void write_report_kv(const MaterializationReport& r, std::ostream& out) {
  out << "iterations=" << r.iterations << '\n';
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    const auto name = rule_name(static_cast<Rule>(i));
    out << "tbox_" << name << '=' << r.tbox_axioms[i] << '\n';
    out << "added_" << name << '=' << r.added_by_rule[i] << '\n';
  }
  out << "added_total=" << r.added_total << '\n';
  out << "total_before=" << r.total_before << '\n';
  out << "total_after=" << r.total_after << '\n';
  out << "per_iteration_added=";
  for (std::size_t i = 0; i < r.per_iteration_added.size(); ++i)
    out << (i ? "," : "") << r.per_iteration_added[i];
  out << '\n';
}

}  // namespace kgmat
