#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "kgmat/embedder.hpp"
#include "kgmat/graph.hpp"
#include "kgmat/random.hpp"

namespace kgmat::testing {

using IriTriple = std::tuple<std::string, std::string, std::string>;

inline Graph graph_from(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline std::set<IriTriple> iri_set(const Graph& g) {
  std::set<IriTriple> out;
  for (const auto& [s, p, o] : g.sorted_iri_triples()) out.emplace(s, p, o);
  return out;
}

inline std::string nt(const std::string& s, const std::string& p, const std::string& o) {
  return "<" + s + "> <" + p + "> <" + o + "> .\n";
}

/// Random graph over at most `max_nodes` entities and `max_predicates`
/// predicates, as N-Triples text.
inline std::string random_graph_text(SplitMix64& rng, int max_nodes, int max_predicates, int max_edges) {
  const int nodes = 1 + static_cast<int>(uniform_index(rng, max_nodes));
  const int preds = 1 + static_cast<int>(uniform_index(rng, max_predicates));
  const int edges = static_cast<int>(uniform_index(rng, max_edges + 1));
  std::string text;
  for (int i = 0; i < edges; ++i)
    text += nt("http://ex.org/n" + std::to_string(uniform_index(rng, nodes)),
               "http://ex.org/p" + std::to_string(uniform_index(rng, preds)),
               "http://ex.org/n" + std::to_string(uniform_index(rng, nodes)));
  return text;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kgmat_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

/// `pairs` mutual spouse links plus `one_way` unanswered ones, no shared nodes.
inline Graph spouse_fixture(int pairs, int one_way) {
  const std::string p = "http://ex.org/spouse";
  std::string text;
  int n = 0;
  auto node = [&] { return "http://ex.org/person" + std::to_string(n++); };
  for (int i = 0; i < pairs; ++i) {
    const auto a = node(), b = node();
    text += nt(a, p, b) + nt(b, p, a);
  }
  for (int i = 0; i < one_way; ++i) {
    const auto a = node(), b = node();
    text += nt(a, p, b);
  }
  return graph_from(text);
}

/// Walk-like sequences that only ever mix tokens of one cluster ("a*" or "b*").
inline TokenSequences two_cluster_corpus(std::size_t walks, std::uint64_t seed) {
  SplitMix64 rng(seed);
  TokenSequences out;
  for (std::size_t w = 0; w < walks; ++w) {
    const char prefix = w % 2 ? 'a' : 'b';
    auto& seq = out.emplace_back();
    for (int i = 0; i < 9; ++i) seq.push_back(std::string(1, prefix) + std::to_string(uniform_index(rng, 5)));
  }
  return out;
}

}  // namespace kgmat::testing
