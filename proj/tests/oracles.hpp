#pragma once

// Independent materialization oracle and its random-instance generator,
// shared by the unit tests and the acceptance run.

#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "test_util.hpp"

namespace kgmat::testing {

inline TBox tbox_from(const std::string& text, Graph& g) {
  std::istringstream in(text);
  return parse_tbox(in, g);
}

inline std::string sym(const std::string& p) { return nt(p, std::string(vocab::kRdfType), std::string(vocab::kSymmetricProperty)); }
inline std::string trans(const std::string& p) {
  return nt(p, std::string(vocab::kRdfType), std::string(vocab::kTransitiveProperty));
}
inline std::string inv(const std::string& p, const std::string& q) { return nt(p, std::string(vocab::kInverseOf), q); }
inline std::string sub(const std::string& p, const std::string& q) { return nt(p, std::string(vocab::kSubPropertyOf), q); }

// Exhaustive chase over IRI tuples, written without any of the library's
// rule code: keep adding every applicable rule instance until none applies.
inline std::set<IriTriple> chase(std::set<IriTriple> facts, const std::set<std::string>& symmetric,
                          const std::set<std::string>& transitive,
                          const std::set<std::pair<std::string, std::string>>& inverse,
                          const std::set<std::pair<std::string, std::string>>& subprop) {
  for (bool changed = true; changed;) {
    changed = false;
    std::set<IriTriple> next = facts;
    for (const auto& [s, p, o] : facts) {
      if (symmetric.contains(p)) next.emplace(o, p, s);
      for (const auto& [a, b] : inverse) {
        if (p == a) next.emplace(o, b, s);
        if (p == b) next.emplace(o, a, s);
      }
      for (const auto& [a, b] : subprop)
        if (p == a) next.emplace(s, b, o);
      if (transitive.contains(p))
        for (const auto& [s2, p2, o2] : facts)
          if (p2 == p && s2 == o) next.emplace(s, p, o2);
    }
    if (next.size() != facts.size()) {
      facts = std::move(next);
      changed = true;
    }
  }
  return facts;
}

struct RandomInstance {
  std::string graph_text;
  std::string tbox_text;
  std::set<std::string> symmetric, transitive;
  std::set<std::pair<std::string, std::string>> inverse, subprop;
};

inline RandomInstance random_instance(SplitMix64& rng) {
  RandomInstance inst;
  inst.graph_text = kgmat::testing::random_graph_text(rng, 30, 4, 45);
  auto pred = [&] { return "http://ex.org/p" + std::to_string(uniform_index(rng, 4)); };
  const int axioms = static_cast<int>(uniform_index(rng, 6));
  for (int i = 0; i < axioms; ++i) {
    switch (uniform_index(rng, 4)) {
      case 0: {
        auto p = pred();
        inst.symmetric.insert(p);
        inst.tbox_text += sym(p);
        break;
      }
      case 1: {
        auto p = pred();
        inst.transitive.insert(p);
        inst.tbox_text += trans(p);
        break;
      }
      case 2: {
        auto p = pred(), q = pred();
        inst.inverse.emplace(p, q);
        inst.tbox_text += inv(p, q);
        break;
      }
      default: {
        auto p = pred(), q = pred();
        if (p == q) break;
        inst.subprop.emplace(p, q);
        inst.tbox_text += sub(p, q);
      }
    }
  }
  return inst;
}

inline const std::string kAnatomy = nt("Cerebellar_tonsil", "isPartOfAnatomicalStructure", "Cerebellum") +
                             nt("Cerebellum", "isPartOfAnatomicalStructure", "Hindbrain");
inline const std::string kAnatomyTBox = trans("isPartOf") + sub("isPartOfAnatomicalStructure", "isPartOf");


}  // namespace kgmat::testing
