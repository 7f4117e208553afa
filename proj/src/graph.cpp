#include "kgmat/graph.hpp"

#include <algorithm>
#include <fstream>

namespace kgmat {

namespace {

bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\r'; }

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_number) : line_(line), number_(line_number) {}

  bool at_end() const noexcept { return pos_ >= line_.size(); }
  char peek() const noexcept { return at_end() ? '\0' : line_[pos_]; }

  std::size_t skip_ws() noexcept {
    const auto start = pos_;
    while (!at_end() && is_ws(line_[pos_])) ++pos_;
    return pos_ - start;
  }

  [[noreturn]] void fail(const std::string& reason) const {
    throw ParseError(ParseError::Kind::MalformedTriple, number_, pos_ + 1, reason);
  }

  std::string_view iri() {
    if (peek() != '<') fail("expected '<'");
    const auto start = ++pos_;
    while (!at_end() && line_[pos_] != '>') {
      if (is_ws(line_[pos_]) || line_[pos_] == '<') fail("invalid character in IRI");
      ++pos_;
    }
    if (at_end()) fail("unterminated IRI");
    const auto text = line_.substr(start, pos_ - start);
    if (text.empty()) fail("empty IRI");
    ++pos_;
    return text;
  }

  std::string_view literal() {
    const auto start = ++pos_;
    while (!at_end() && line_[pos_] != '"') ++pos_;
    if (at_end()) fail("unterminated literal");
    const auto text = line_.substr(start, pos_ - start);
    ++pos_;
    return text;
  }

  void advance() noexcept { ++pos_; }

  void require_ws() {
    if (skip_ws() == 0) fail("expected whitespace");
  }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto raw = parse_triple_line(line, number)) fn(*raw, number);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

bool is_valid_iri(std::string_view text) noexcept {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(), [](char c) {
    return c == '<' || c == '>' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         reason),
      kind_(kind),
      line_(line),
      column_(column) {}

std::uint32_t Dictionary::intern(std::string_view text) {
  if (auto it = ids_.find(text); it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(texts_.size());
  texts_.emplace_back(text);
  ids_.emplace(texts_.back(), id);
  return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view text) const {
  if (auto it = ids_.find(text); it != ids_.end()) return it->second;
  return std::nullopt;
}

EntityId Graph::intern_entity(std::string_view iri) {
  const auto id = entities_.intern(iri);
  if (id >= adjacency_.size()) adjacency_.resize(id + 1);
  return id;
}

PredicateId Graph::intern_predicate(std::string_view iri) { return predicates_.intern(iri); }

bool Graph::add(const Triple& t) {
  if (t.subject >= entities_.size() || t.object >= entities_.size() || t.predicate >= predicates_.size())
    throw std::out_of_range("triple references an unknown id");
  if (!edge_set_.insert(t).second) return false;
  adjacency_[t.subject].push_back({t.predicate, t.object});
  return true;
}

bool Graph::add(std::string_view s, std::string_view p, std::string_view o) {
  const auto subject = intern_entity(s);
  const auto predicate = intern_predicate(p);
  const auto object = intern_entity(o);
  return add(Triple{subject, predicate, object});
}

void Graph::add_literal(std::string_view s, std::string_view p, std::string literal) {
  literals_.push_back({intern_entity(s), intern_predicate(p), std::move(literal)});
}

std::vector<Triple> Graph::sorted_triples() const {
  std::vector<Triple> out(edge_set_.begin(), edge_set_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<std::string_view, 3>> Graph::sorted_iri_triples() const {
  std::vector<std::array<std::string_view, 3>> out;
  out.reserve(edge_set_.size());
  for (const auto& t : edge_set_)
    out.push_back({entities_.text(t.subject), predicates_.text(t.predicate), entities_.text(t.object)});
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Graph::fingerprint() const {
  std::uint64_t h = fnv1a64("");
  for (const auto& [s, p, o] : sorted_iri_triples()) {
    h = fnv1a64(s, h);
    h = fnv1a64(" ", h);
    h = fnv1a64(p, h);
    h = fnv1a64(" ", h);
    h = fnv1a64(o, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

std::optional<RawTriple> parse_triple_line(std::string_view line, std::size_t line_number) {
  LineCursor cur(line, line_number);
  cur.skip_ws();
  if (cur.at_end() || cur.peek() == '#') return std::nullopt;

  RawTriple raw;
  raw.subject = cur.iri();
  cur.require_ws();
  raw.predicate = cur.iri();
  cur.require_ws();
  if (cur.peek() == '"') {
    raw.object = cur.literal();
    raw.object_is_literal = true;
  } else {
    raw.object = cur.iri();
  }
  cur.skip_ws();
  if (cur.peek() != '.') cur.fail("expected '.'");
  cur.advance();
  cur.skip_ws();
  if (!cur.at_end()) cur.fail("trailing characters after '.'");
  return raw;
}

Graph parse_graph(std::istream& in) {
  Graph g;
  for_each_line(in, [&](const RawTriple& raw, std::size_t) {
    if (raw.object_is_literal)
      g.add_literal(raw.subject, raw.predicate, std::string(raw.object));
    else
      g.add(raw.subject, raw.predicate, raw.object);
  });
  return g;
}

Graph parse_graph_file(const std::string& path) {
  auto in = open_input(path);
  return parse_graph(in);
}

TBox parse_tbox(std::istream& in, Graph& graph) {
  TBox tbox;
  for_each_line(in, [&](const RawTriple& raw, std::size_t line) {
    auto reject = [&](const std::string& why) {
      throw ParseError(ParseError::Kind::UnrecognizedAxiom, line, 1, why);
    };
    if (raw.object_is_literal) reject("axiom object must be an IRI");

    if (raw.predicate == vocab::kRdfType) {
      const auto p = graph.intern_predicate(raw.subject);
      if (raw.object == vocab::kSymmetricProperty)
        tbox.symmetric.insert(p);
      else if (raw.object == vocab::kTransitiveProperty)
        tbox.transitive.insert(p);
      else
        reject("unsupported property type <" + std::string(raw.object) + ">");
    } else if (raw.predicate == vocab::kInverseOf) {
      const auto p = graph.intern_predicate(raw.subject);
      const auto q = graph.intern_predicate(raw.object);
      tbox.inverse.insert(std::minmax(p, q));
    } else if (raw.predicate == vocab::kSubPropertyOf) {
      if (raw.subject == raw.object) reject("a property cannot be declared its own subproperty");
      const auto sub = graph.intern_predicate(raw.subject);
      const auto super = graph.intern_predicate(raw.object);
      tbox.subproperty.insert({sub, super});
    } else {
      reject("unsupported axiom predicate <" + std::string(raw.predicate) + ">");
    }
  });
  return tbox;
}

TBox parse_tbox_file(const std::string& path, Graph& graph) {
  auto in = open_input(path);
  return parse_tbox(in, graph);
}

void serialize_graph(const Graph& g, std::ostream& out) {
  const auto& ents = g.entities();
  const auto& preds = g.predicates();
  for (const auto& t : g.sorted_triples())
    out << '<' << ents.text(t.subject) << "> <" << preds.text(t.predicate) << "> <" << ents.text(t.object)
        << "> .\n";
  for (const auto& lit : g.literals())
    out << '<' << ents.text(lit.subject) << "> <" << preds.text(lit.predicate) << "> \"" << lit.literal
        << "\" .\n";
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  serialize_graph(g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kgmat
