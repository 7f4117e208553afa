#include "kgmat/datasets.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace kgmat {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Accepts both `<iri>` and bare `iri`.
std::string entity(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && s.front() == '<' && s.back() == '>') s = s.substr(1, s.size() - 2);
  return s;
}

double number(const std::string& text, std::size_t line) {
  const auto t = trim(text);
  double value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw DatasetError("line " + std::to_string(line) + ": not a number: '" + t + "'");
  return value;
}

template <class Fn>
void for_each_row(std::istream& in, bool skip_header, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    if (header_pending && !trim(line).empty()) {
      header_pending = false;
      continue;
    }
    fn(line, number);
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

void LabeledDataset::validate() const {
  std::set<std::string> entities, labels;
  for (const auto& [e, l] : records) {
    if (!entities.insert(e).second) throw DatasetError(name + ": duplicate entity " + e);
    labels.insert(l);
  }
  if (labels.size() < 2) throw DatasetError(name + ": needs at least 2 distinct labels");
}

void RegressionDataset::validate() const {
  std::set<std::string> entities;
  for (const auto& [e, y] : records) {
    if (!entities.insert(e).second) throw DatasetError(name + ": duplicate entity " + e);
    if (!std::isfinite(y)) throw DatasetError(name + ": non-finite target for " + e);
  }
}

void RankingDataset::validate() const {
  for (const auto& g : groups) {
    if (g.candidates.size() < 2) throw DatasetError(name + ": group " + g.main + " has fewer than 2 candidates");
    std::set<std::string> seen(g.candidates.begin(), g.candidates.end());
    if (seen.size() != g.candidates.size()) throw DatasetError(name + ": duplicate candidate in group " + g.main);
  }
}

void DocSimDataset::validate() const {
  for (const auto& [id, ents] : documents)
    if (ents.empty()) throw DatasetError(name + ": document " + id + " has no entities");
  for (const auto& p : gold)
    if (!documents.contains(p.first) || !documents.contains(p.second))
      throw DatasetError(name + ": gold pair references unknown document " + p.first + "/" + p.second);
}

LabeledDataset read_labeled_dataset(std::istream& in, std::string name) {
  LabeledDataset ds{std::move(name), {}};
  for_each_row(in, true, [&](const std::string& line, std::size_t n) {
    if (trim(line).empty()) return;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw DatasetError("line " + std::to_string(n) + ": expected entity<TAB>label");
    ds.records.emplace_back(entity(f[0]), trim(f[1]));
  });
  ds.validate();
  return ds;
}

RegressionDataset read_regression_dataset(std::istream& in, std::string name) {
  RegressionDataset ds{std::move(name), {}};
  for_each_row(in, true, [&](const std::string& line, std::size_t n) {
    if (trim(line).empty()) return;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw DatasetError("line " + std::to_string(n) + ": expected entity<TAB>value");
    ds.records.emplace_back(entity(f[0]), number(f[1], n));
  });
  ds.validate();
  return ds;
}

RankingDataset read_ranking_dataset(std::istream& in, std::string name) {
  RankingDataset ds{std::move(name), {}};
  bool in_block = false, first = true;
  for_each_row(in, false, [&](const std::string& line, std::size_t n) {
    if (trim(line).empty()) {
      in_block = false;
      return;
    }
    const auto f = split(line, '\t');
    const bool header = first && trim(f[0]) != "main:";
    first = false;
    if (header) return;
    if (trim(f[0]) == "main:") {
      if (f.size() != 2) throw DatasetError("line " + std::to_string(n) + ": expected main:<TAB><iri>");
      ds.groups.push_back({entity(f[1]), {}});
      in_block = true;
    } else {
      if (!in_block) throw DatasetError("line " + std::to_string(n) + ": candidate outside a main: block");
      ds.groups.back().candidates.push_back(entity(line));
    }
  });
  ds.validate();
  return ds;
}

DocSimDataset read_docsim_dataset(std::istream& in, std::string name) {
  DocSimDataset ds{std::move(name), {}, {}};
  bool first = true;
  for_each_row(in, false, [&](const std::string& line, std::size_t n) {
    if (trim(line).empty()) return;
    const auto f = split(line, '\t');
    const auto kind = trim(f[0]);
    const bool header = first && kind != "doc" && kind != "gold";
    first = false;
    if (header) return;
    if (kind == "doc" && f.size() == 3) {
      auto& ents = ds.documents[trim(f[1])];
      for (const auto& e : split(f[2], ','))
        if (auto iri = entity(e); !iri.empty()) ents.push_back(iri);
    } else if (kind == "gold" && f.size() == 4) {
      ds.gold.push_back({trim(f[1]), trim(f[2]), number(f[3], n)});
    } else {
      throw DatasetError("line " + std::to_string(n) + ": expected a doc or gold row");
    }
  });
  ds.validate();
  return ds;
}

LabeledDataset read_labeled_dataset_file(const std::string& path) {
  auto in = open(path);
  return read_labeled_dataset(in, stem(path));
}

RegressionDataset read_regression_dataset_file(const std::string& path) {
  auto in = open(path);
  return read_regression_dataset(in, stem(path));
}

RankingDataset read_ranking_dataset_file(const std::string& path) {
  auto in = open(path);
  return read_ranking_dataset(in, stem(path));
}

DocSimDataset read_docsim_dataset_file(const std::string& path) {
  auto in = open(path);
  return read_docsim_dataset(in, stem(path));
}

}  // namespace kgmat
