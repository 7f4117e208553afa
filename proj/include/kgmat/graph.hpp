#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgmat/random.hpp"

namespace kgmat {

using EntityId = std::uint32_t;
using PredicateId = std::uint32_t;

namespace vocab {
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kSymmetricProperty = "http://www.w3.org/2002/07/owl#SymmetricProperty";
inline constexpr std::string_view kTransitiveProperty = "http://www.w3.org/2002/07/owl#TransitiveProperty";
inline constexpr std::string_view kInverseOf = "http://www.w3.org/2002/07/owl#inverseOf";
inline constexpr std::string_view kSubPropertyOf = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
}  // namespace vocab

/// Non-empty, no whitespace, no angle brackets.
bool is_valid_iri(std::string_view text) noexcept;

struct Edge {
  PredicateId predicate;
  EntityId object;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Triple {
  EntityId subject;
  PredicateId predicate;
  EntityId object;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    return static_cast<std::size_t>(
        mix64((static_cast<std::uint64_t>(t.subject) << 32 | t.object) ^ mix64(t.predicate)));
  }
};

struct LiteralTriple {
  EntityId subject;
  PredicateId predicate;
  std::string literal;
};

/// Bidirectional string <-> dense id map.
class Dictionary {
 public:
  std::uint32_t intern(std::string_view text);
  std::optional<std::uint32_t> find(std::string_view text) const;
  const std::string& text(std::uint32_t id) const { return texts_.at(id); }
  std::size_t size() const noexcept { return texts_.size(); }
  std::span<const std::string> texts() const noexcept { return texts_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> texts_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ids_;
};

/// Dictionary-encoded directed multigraph with set semantics on (s, p, o).
/// Literal-valued triples are kept aside and never take part in adjacency.
class Graph {
 public:
  EntityId intern_entity(std::string_view iri);
  PredicateId intern_predicate(std::string_view iri);

  /// Adds a resource triple; returns false if it was already present.
  bool add(const Triple& t);
  bool add(std::string_view s, std::string_view p, std::string_view o);
  void add_literal(std::string_view s, std::string_view p, std::string literal);

  bool contains(const Triple& t) const { return edge_set_.contains(t); }

  const Dictionary& entities() const noexcept { return entities_; }
  const Dictionary& predicates() const noexcept { return predicates_; }
  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t triple_count() const noexcept { return edge_set_.size(); }

  std::span<const Edge> out_edges(EntityId e) const { return adjacency_.at(e); }
  std::span<const LiteralTriple> literals() const noexcept { return literals_; }

  /// All resource triples sorted by (s, p, o) ids.
  std::vector<Triple> sorted_triples() const;

  /// Resource triples rendered as IRI strings, sorted lexicographically.
  std::vector<std::array<std::string_view, 3>> sorted_iri_triples() const;

  /// Order-independent hash of the resource triple set (IRI text based).
  std::uint64_t fingerprint() const;

 private:
  Dictionary entities_;
  Dictionary predicates_;
  std::vector<std::vector<Edge>> adjacency_;
  std::unordered_set<Triple, TripleHash> edge_set_;
  std::vector<LiteralTriple> literals_;
};

struct TBox {
  std::set<PredicateId> symmetric;
  std::set<PredicateId> transitive;
  std::set<std::pair<PredicateId, PredicateId>> inverse;      // (min, max)
  std::set<std::pair<PredicateId, PredicateId>> subproperty;  // (sub, super)

  bool empty() const noexcept {
    return symmetric.empty() && transitive.empty() && inverse.empty() && subproperty.empty();
  }
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { MalformedTriple, UnrecognizedAxiom };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& reason);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// One parsed line of the triple grammar.
struct RawTriple {
  std::string_view subject;
  std::string_view predicate;
  std::string_view object;
  bool object_is_literal = false;
};

/// Parses a single line. Returns nullopt for blank and comment lines.
/// Throws ParseError(MalformedTriple) with the given line number.
std::optional<RawTriple> parse_triple_line(std::string_view line, std::size_t line_number);

Graph parse_graph(std::istream& in);
Graph parse_graph_file(const std::string& path);

/// Parses T-box declarations; predicates are registered in `graph`.
TBox parse_tbox(std::istream& in, Graph& graph);
TBox parse_tbox_file(const std::string& path, Graph& graph);

void serialize_graph(const Graph& g, std::ostream& out);
void write_graph_file(const Graph& g, const std::string& path);

}  // namespace kgmat
