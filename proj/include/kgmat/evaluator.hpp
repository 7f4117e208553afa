#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgmat/datasets.hpp"
#include "kgmat/embedder.hpp"

namespace kgmat {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooFewRecordsError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class DegenerateClassError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class EmptyTrainingSetError : public EvaluationError {
 public:
  EmptyTrainingSetError() : EvaluationError("k-NN needs a non-empty training set with k <= size") {}
};

class UnknownMainEntityError : public EvaluationError {
 public:
  explicit UnknownMainEntityError(const std::string& iri)
      : EvaluationError("main entity not in vocabulary: " + iri) {}
};

class EmptyDocumentError : public EvaluationError {
 public:
  EmptyDocumentError() : EvaluationError("document has no entity with an embedding") {}
};

/// Row-major dense matrix of feature vectors.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  std::span<const double> row(std::size_t i) const { return std::span<const double>(data).subspan(i * cols, cols); }
  std::span<double> row(std::size_t i) { return std::span<double>(data).subspan(i * cols, cols); }
  void push_row(std::span<const double> r);
  void push_row(std::span<const float> r);
  FeatureMatrix select(std::span<const std::size_t> indices) const;
};

using Folds = std::vector<std::vector<std::size_t>>;

/// Partition of [0, n) into k folds whose sizes differ by at most one.
/// With labels, each label's per-fold counts also differ by at most one.
Folds kfold_split(std::size_t n, std::size_t k, std::uint64_t seed,
                  std::span<const std::string> stratify_labels = {});

/// Majority label among the k nearest (Euclidean). Ties go to the label with
/// the smaller summed distance, then to the lexicographically smaller label.
std::string knn_classify(const FeatureMatrix& train, std::span<const std::string> labels,
                         std::span<const double> query, std::size_t k);

/// Mean target of the k nearest.
double knn_regress(const FeatureMatrix& train, std::span<const double> targets, std::span<const double> query,
                   std::size_t k);

/// Gaussian naive Bayes, per-class per-dimension variance floored at 1e-9.
class GaussianNB {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  GaussianNB(const FeatureMatrix& train, std::span<const std::string> labels);

  /// (label, posterior) in lexicographic label order.
  std::vector<std::pair<std::string, double>> posteriors(std::span<const double> query) const;
  std::string predict(std::span<const double> query) const;

 private:
  std::vector<double> log_joint(std::span<const double> query) const;

  struct ClassModel {
    std::string label;
    double log_prior;
    std::vector<double> mean;
    std::vector<double> variance;
  };
  std::vector<ClassModel> classes_;
};

std::string gaussian_nb(const FeatureMatrix& train, std::span<const std::string> labels,
                        std::span<const double> query);

/// OLS with intercept via complete orthogonal decomposition; rank-deficient
/// designs get the minimum-norm solution.
std::vector<double> linreg_fit_predict(const FeatureMatrix& train, std::span<const double> targets,
                                       const FeatureMatrix& queries);

/// Max-average document similarity over entity vectors.
double document_similarity(std::span<const std::span<const float>> d1, std::span<const std::span<const float>> d2);
double document_similarity(const EmbeddingModel& m, std::span<const std::string> d1,
                           std::span<const std::string> d2);

struct Metric {
  std::string learner;
  std::string name;
  std::optional<double> value;  // nullopt renders as n/a
};

struct GroupResult {
  std::string main;
  std::size_t candidates = 0;
  std::optional<double> spearman;
};

struct EvalReport {
  std::string task;
  std::string dataset;
  std::string model;
  std::vector<Metric> metrics;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;
  std::size_t dropped = 0;
  std::vector<GroupResult> groups;

  std::optional<double> metric(std::string_view learner, std::string_view name) const;
};

inline constexpr std::size_t kDefaultFolds = 10;
inline constexpr std::size_t kNeighbours = 3;

EvalReport run_classification(const EmbeddingModel& m, const LabeledDataset& ds, std::size_t folds,
                              std::uint64_t seed);
EvalReport run_regression(const EmbeddingModel& m, const RegressionDataset& ds, std::size_t folds,
                          std::uint64_t seed);
/// Serves both entity relatedness and entity similarity.
EvalReport run_entity_ranking(const EmbeddingModel& m, const RankingDataset& ds);
EvalReport run_docsim(const EmbeddingModel& m, const DocSimDataset& ds);

/// Aligned table followed by `key=value` lines.
void write_eval_report(const EvalReport& r, std::ostream& out);

}  // namespace kgmat
