#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgmat {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabeledDataset {
  std::string name;
  std::vector<std::pair<std::string, std::string>> records;  // (entity, label)
  void validate() const;
};

struct RegressionDataset {
  std::string name;
  std::vector<std::pair<std::string, double>> records;  // (entity, target)
  void validate() const;
};

struct RankingGroup {
  std::string main;
  std::vector<std::string> candidates;  // gold order, most related first
};

struct RankingDataset {
  std::string name;
  std::vector<RankingGroup> groups;
  void validate() const;
};

struct DocSimPair {
  std::string first;
  std::string second;
  double score = 0.0;
};

struct DocSimDataset {
  std::string name;
  std::map<std::string, std::vector<std::string>> documents;
  std::vector<DocSimPair> gold;
  void validate() const;
};

// TSV readers. Classification and regression files start with a header
// row; ranking and docsim files may start with one (any first line that is
// not a data row). Ranking files are `main:<TAB><iri>` blocks; docsim files
// hold `doc` and `gold` rows. Lines starting with '#' are comments in all four.
LabeledDataset read_labeled_dataset(std::istream& in, std::string name = {});
RegressionDataset read_regression_dataset(std::istream& in, std::string name = {});
RankingDataset read_ranking_dataset(std::istream& in, std::string name = {});
DocSimDataset read_docsim_dataset(std::istream& in, std::string name = {});

LabeledDataset read_labeled_dataset_file(const std::string& path);
RegressionDataset read_regression_dataset_file(const std::string& path);
RankingDataset read_ranking_dataset_file(const std::string& path);
DocSimDataset read_docsim_dataset_file(const std::string& path);

}  // namespace kgmat
