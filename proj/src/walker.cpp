#include "kgmat/walker.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <omp.h>

namespace kgmat {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw std::invalid_argument("walks per node must be >= 1");
  if (depth < 1) throw std::invalid_argument("walk depth must be >= 1");
}

std::uint64_t walk_stream_seed(std::uint64_t seed, EntityId start, std::uint32_t walk_index) noexcept {
  return seed ^ mix64(static_cast<std::uint64_t>(start) << 32 | walk_index);
}

void draw_walk(const Graph& g, EntityId start, std::uint32_t depth, std::uint64_t stream_seed,
               std::vector<std::uint32_t>& out) {
  SplitMix64 rng(stream_seed);
  out.clear();
  out.push_back(start);
  EntityId current = start;
  for (std::uint32_t hop = 0; hop < depth; ++hop) {
    const auto edges = g.out_edges(current);
    if (edges.empty()) break;
    const auto& e = edges[uniform_index(rng, edges.size())];
    out.push_back(e.predicate);
    out.push_back(e.object);
    current = e.object;
  }
}

WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg) {
  cfg.validate();
  if (g.entity_count() == 0) throw EmptyGraphError();

  std::vector<EntityId> starts;
  for (EntityId e = 0; e < g.entity_count(); ++e)
    if (!g.out_edges(e).empty()) starts.push_back(e);

  const std::size_t stride = 2 * static_cast<std::size_t>(cfg.depth) + 1;
  const std::size_t n_walks = starts.size() * cfg.walks_per_node;
  std::vector<std::uint32_t> slab(n_walks * stride);
  std::vector<std::uint32_t> lengths(n_walks);

#pragma omp parallel
  {
    std::vector<std::uint32_t> buf;
    buf.reserve(stride);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(starts.size()); ++i) {
      for (std::uint32_t w = 0; w < cfg.walks_per_node; ++w) {
        draw_walk(g, starts[i], cfg.depth, walk_stream_seed(cfg.seed, starts[i], w), buf);
        const std::size_t slot = static_cast<std::size_t>(i) * cfg.walks_per_node + w;
        std::copy(buf.begin(), buf.end(), slab.begin() + slot * stride);
        lengths[slot] = static_cast<std::uint32_t>(buf.size());
      }
    }
  }

  WalkCorpus corpus;
  corpus.config = cfg;
  corpus.graph_fingerprint = g.fingerprint();
  corpus.offsets.reserve(n_walks + 1);
  for (std::size_t slot = 0; slot < n_walks; ++slot)
    corpus.append(std::span<const std::uint32_t>(slab).subspan(slot * stride, lengths[slot]));
  return corpus;
}

std::vector<std::vector<std::string>> corpus_to_token_sequences(const WalkCorpus& c, const Graph& g) {
  std::vector<std::vector<std::string>> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto walk = c.walk(i);
    auto& seq = out.emplace_back();
    seq.reserve(walk.size());
    for (std::size_t j = 0; j < walk.size(); ++j)
      seq.push_back(j % 2 == 0 ? g.entities().text(walk[j]) : g.predicates().text(walk[j]));
  }
  return out;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, fp, 16);
  return std::string(16 - (end - buf), '0') + std::string(buf, end);
}

void write_corpus(const WalkCorpus& c, const Graph& g, std::ostream& out) {
  out << "# walks=" << c.config.walks_per_node << " depth=" << c.config.depth << " seed=" << c.config.seed
      << " graph=" << fingerprint_hex(c.graph_fingerprint) << '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto walk = c.walk(i);
    for (std::size_t j = 0; j < walk.size(); ++j) {
      if (j) out << ' ';
      out << (j % 2 == 0 ? g.entities().text(walk[j]) : g.predicates().text(walk[j]));
    }
    out << '\n';
  }
}

void write_corpus_file(const WalkCorpus& c, const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_corpus(c, g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

template <class T>
T header_value(const std::string& header, std::string_view key) {
  const auto needle = std::string(key) + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) throw std::runtime_error("corpus header lacks '" + std::string(key) + "'");
  const char* first = header.data() + pos + needle.size();
  const char* last = header.data() + header.size();
  T value{};
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc()) throw std::runtime_error("bad corpus header value for '" + std::string(key) + "'");
  return value;
}

}  // namespace

CorpusFile read_corpus(std::istream& in) {
  CorpusFile file;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen && line.starts_with("# walks=")) {
      header_seen = true;
      file.config.walks_per_node = header_value<std::uint32_t>(line, "walks");
      file.config.depth = header_value<std::uint32_t>(line, "depth");
      file.config.seed = header_value<std::uint64_t>(line, "seed");
      if (auto pos = line.find("graph="); pos != std::string::npos) file.graph_fingerprint = line.substr(pos + 6);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens(line);
    auto& seq = file.sequences.emplace_back();
    for (std::string tok; tokens >> tok;) seq.push_back(std::move(tok));
  }
  return file;
}

CorpusFile read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_corpus(in);
}

}  // namespace kgmat
