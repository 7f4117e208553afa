#include "kgmat/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "kgmat/random.hpp"
#include "kgmat/stats.hpp"

namespace kgmat {

void FeatureMatrix::push_row(std::span<const double> r) {
  if (rows == 0 && cols == 0) cols = r.size();
  if (r.size() != cols) throw std::invalid_argument("row width mismatch");
  data.insert(data.end(), r.begin(), r.end());
  ++rows;
}

void FeatureMatrix::push_row(std::span<const float> r) {
  std::vector<double> tmp(r.begin(), r.end());
  push_row(std::span<const double>(tmp));
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
  FeatureMatrix out(indices.size(), cols);
  for (std::size_t i = 0; i < indices.size(); ++i) std::ranges::copy(row(indices[i]), out.row(i).begin());
  return out;
}

Folds kfold_split(std::size_t n, std::size_t k, std::uint64_t seed, std::span<const std::string> stratify_labels) {
  if (k < 2 || n < k)
    throw TooFewRecordsError("cannot split " + std::to_string(n) + " records into " + std::to_string(k) + " folds");
  if (!stratify_labels.empty() && stratify_labels.size() != n)
    throw std::invalid_argument("kfold_split: label count differs from record count");

  SplitMix64 rng(mix64(seed));
  std::vector<std::size_t> order;
  order.reserve(n);
  if (stratify_labels.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(rng, order.begin(), order.end());
  } else {
    std::map<std::string_view, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < n; ++i) by_label[stratify_labels[i]].push_back(i);
    for (auto& [label, idx] : by_label) {
      shuffle(rng, idx.begin(), idx.end());
      order.insert(order.end(), idx.begin(), idx.end());
    }
  }
  // Dealing the (label-grouped) order round-robin balances both fold sizes
  // and per-label counts.
  Folds folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

struct Neighbour {
  double distance;
  std::size_t index;
  auto operator<=>(const Neighbour&) const = default;
};

std::vector<Neighbour> nearest(const FeatureMatrix& train, std::span<const double> query, std::size_t k) {
  if (train.rows == 0 || k == 0 || k > train.rows) throw EmptyTrainingSetError();
  std::vector<Neighbour> all(train.rows);
  for (std::size_t i = 0; i < train.rows; ++i) {
    const auto r = train.row(i);
    double d2 = 0;
    for (std::size_t c = 0; c < r.size(); ++c) d2 += (r[c] - query[c]) * (r[c] - query[c]);
    all[i] = {std::sqrt(d2), i};
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  return all;
}

FeatureMatrix add_intercept(const FeatureMatrix& x) {
  FeatureMatrix out(x.rows, x.cols + 1);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto r = out.row(i);
    r[0] = 1.0;
    std::ranges::copy(x.row(i), r.begin() + 1);
  }
  return out;
}

template <class T>
std::vector<T> pick(std::span<const T> v, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& fold) {
  std::vector<std::size_t> out;
  out.reserve(n - fold.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < fold.size() && fold[j] == i)
      ++j;
    else
      out.push_back(i);
  }
  return out;
}

}  // namespace

std::string knn_classify(const FeatureMatrix& train, std::span<const std::string> labels,
                         std::span<const double> query, std::size_t k) {
  const auto nn = nearest(train, query, k);
  struct Vote {
    std::size_t count = 0;
    double distance = 0;
  };
  std::map<std::string_view, Vote> votes;
  for (const auto& n : nn) {
    auto& v = votes[labels[n.index]];
    ++v.count;
    v.distance += n.distance;
  }
  // map iteration is lexicographic, so strict comparisons keep the smaller label on full ties.
  auto best = votes.begin();
  for (auto it = std::next(votes.begin()); it != votes.end(); ++it) {
    if (it->second.count > best->second.count ||
        (it->second.count == best->second.count && it->second.distance < best->second.distance))
      best = it;
  }
  return std::string(best->first);
}

double knn_regress(const FeatureMatrix& train, std::span<const double> targets, std::span<const double> query,
                   std::size_t k) {
  const auto nn = nearest(train, query, k);
  double sum = 0;
  for (const auto& n : nn) sum += targets[n.index];
  return sum / static_cast<double>(nn.size());
}

GaussianNB::GaussianNB(const FeatureMatrix& train, std::span<const std::string> labels) {
  std::map<std::string_view, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < train.rows; ++i) members[labels[i]].push_back(i);
  for (const auto& [label, idx] : members) {
    if (idx.size() < 2)
      throw DegenerateClassError("class '" + std::string(label) + "' has fewer than 2 training points");
    ClassModel cm{std::string(label), std::log(static_cast<double>(idx.size()) / train.rows),
                  std::vector<double>(train.cols), std::vector<double>(train.cols)};
    for (auto i : idx)
      for (std::size_t c = 0; c < train.cols; ++c) cm.mean[c] += train.row(i)[c];
    for (auto& m : cm.mean) m /= static_cast<double>(idx.size());
    for (auto i : idx)
      for (std::size_t c = 0; c < train.cols; ++c) {
        const double d = train.row(i)[c] - cm.mean[c];
        cm.variance[c] += d * d;
      }
    for (auto& v : cm.variance) v = std::max(v / static_cast<double>(idx.size()), kVarianceFloor);
    classes_.push_back(std::move(cm));
  }
}

std::vector<double> GaussianNB::log_joint(std::span<const double> query) const {
  static const double kLog2Pi = std::log(2.0 * std::acos(-1.0));
  std::vector<double> out;
  out.reserve(classes_.size());
  for (const auto& cm : classes_) {
    double lp = cm.log_prior;
    for (std::size_t c = 0; c < query.size(); ++c) {
      const double d = query[c] - cm.mean[c];
      lp += -0.5 * (kLog2Pi + std::log(cm.variance[c])) - d * d / (2.0 * cm.variance[c]);
    }
    out.push_back(lp);
  }
  return out;
}

std::vector<std::pair<std::string, double>> GaussianNB::posteriors(std::span<const double> query) const {
  const auto lj = log_joint(query);
  const double top = *std::max_element(lj.begin(), lj.end());
  double z = 0;
  for (double v : lj) z += std::exp(v - top);
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) out.emplace_back(classes_[i].label, std::exp(lj[i] - top) / z);
  return out;
}

std::string GaussianNB::predict(std::span<const double> query) const {
  const auto lj = log_joint(query);
  std::size_t best = 0;
  for (std::size_t i = 1; i < lj.size(); ++i)
    if (lj[i] > lj[best]) best = i;
  return classes_[best].label;
}

std::string gaussian_nb(const FeatureMatrix& train, std::span<const std::string> labels,
                        std::span<const double> query) {
  return GaussianNB(train, labels).predict(query);
}

std::vector<double> linreg_fit_predict(const FeatureMatrix& train, std::span<const double> targets,
                                       const FeatureMatrix& queries) {
  if (train.rows < 2) throw TooFewRecordsError("linear regression needs at least 2 training rows");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto design = add_intercept(train);
  Eigen::Map<const RowMajor> a(design.data.data(), design.rows, design.cols);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  const Eigen::VectorXd beta = a.completeOrthogonalDecomposition().solve(y);

  const auto q = add_intercept(queries);
  Eigen::Map<const RowMajor> qm(q.data.data(), q.rows, q.cols);
  const Eigen::VectorXd pred = qm * beta;
  return std::vector<double>(pred.data(), pred.data() + pred.size());
}

double document_similarity(std::span<const std::span<const float>> d1, std::span<const std::span<const float>> d2) {
  if (d1.empty() || d2.empty()) throw EmptyDocumentError();
  std::vector<double> sims(d1.size() * d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i)
    for (std::size_t j = 0; j < d2.size(); ++j) sims[i * d2.size() + j] = cosine(d1[i], d2[j]);

  // Separate sums keep the result bit-identical under argument swap.
  double forward = 0, backward = 0;
  for (std::size_t i = 0; i < d1.size(); ++i)
    forward += *std::max_element(sims.begin() + i * d2.size(), sims.begin() + (i + 1) * d2.size());
  for (std::size_t j = 0; j < d2.size(); ++j) {
    double best = sims[j];
    for (std::size_t i = 1; i < d1.size(); ++i) best = std::max(best, sims[i * d2.size() + j]);
    backward += best;
  }
  return (forward + backward) / static_cast<double>(d1.size() + d2.size());
}

namespace {

std::vector<std::span<const float>> lookup(const EmbeddingModel& m, std::span<const std::string> entities) {
  std::vector<std::span<const float>> out;
  for (const auto& e : entities)
    if (auto v = m.find(e)) out.push_back(*v);
  return out;
}

}  // namespace

double document_similarity(const EmbeddingModel& m, std::span<const std::string> d1,
                           std::span<const std::string> d2) {
  const auto v1 = lookup(m, d1);
  const auto v2 = lookup(m, d2);
  return document_similarity(std::span<const std::span<const float>>(v1), std::span<const std::span<const float>>(v2));
}

std::optional<double> EvalReport::metric(std::string_view learner, std::string_view name) const {
  for (const auto& m : metrics)
    if (m.learner == learner && m.name == name) return m.value;
  return std::nullopt;
}

EvalReport run_classification(const EmbeddingModel& m, const LabeledDataset& ds, std::size_t folds,
                              std::uint64_t seed) {
  EvalReport report;
  report.task = "classification";
  report.dataset = ds.name;
  report.folds = folds;
  report.seed = seed;
  FeatureMatrix x;
  std::vector<std::string> labels;
  for (const auto& [entity, label] : ds.records) {
    if (auto v = m.find(entity)) {
      x.push_row(*v);
      labels.push_back(label);
    } else {
      ++report.dropped;
    }
  }
  report.evaluated = labels.size();
  std::map<std::string, std::size_t> per_class;
  for (const auto& l : labels) ++per_class[l];
  if (per_class.size() < 2) throw TooFewRecordsError(ds.name + ": fewer than 2 classes with embeddings");
  for (const auto& [l, c] : per_class)
    if (c < 2) throw TooFewRecordsError(ds.name + ": class '" + l + "' has fewer than 2 embedded entities");

  const auto split = kfold_split(labels.size(), folds, seed, labels);
  std::vector<double> nb_acc(folds), knn_acc(folds);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(folds); ++f) {
    const auto& test = split[f];
    const auto train_idx = complement(labels.size(), test);
    const auto xtr = x.select(train_idx);
    const auto ytr = pick<std::string>(labels, train_idx);

    // Classes with a single training point in this fold cannot be modelled
    // by NB; they are left out of its candidate set.
    std::map<std::string_view, std::size_t> counts;
    for (const auto& l : ytr) ++counts[l];
    std::vector<std::size_t> nb_rows;
    for (std::size_t i = 0; i < ytr.size(); ++i)
      if (counts[ytr[i]] >= 2) nb_rows.push_back(i);
    std::optional<GaussianNB> nb;
    if (!nb_rows.empty()) nb.emplace(xtr.select(nb_rows), pick<std::string>(ytr, nb_rows));

    const std::size_t k = std::min(kNeighbours, xtr.rows);
    std::size_t nb_hits = 0, knn_hits = 0;
    for (auto i : test) {
      if (nb && nb->predict(x.row(i)) == labels[i]) ++nb_hits;
      if (knn_classify(xtr, ytr, x.row(i), k) == labels[i]) ++knn_hits;
    }
    nb_acc[f] = static_cast<double>(nb_hits) / test.size();
    knn_acc[f] = static_cast<double>(knn_hits) / test.size();
  }
  report.metrics = {{"naive_bayes", "accuracy", mean(nb_acc)},
                    {"knn", "accuracy", mean(knn_acc)},
                    {"c45", "accuracy", std::nullopt},
                    {"svm", "accuracy", std::nullopt}};
  return report;
}

EvalReport run_regression(const EmbeddingModel& m, const RegressionDataset& ds, std::size_t folds,
                          std::uint64_t seed) {
  EvalReport report;
  report.task = "regression";
  report.dataset = ds.name;
  report.folds = folds;
  report.seed = seed;
  FeatureMatrix x;
  std::vector<double> y;
  for (const auto& [entity, target] : ds.records) {
    if (auto v = m.find(entity)) {
      x.push_row(*v);
      y.push_back(target);
    } else {
      ++report.dropped;
    }
  }
  report.evaluated = y.size();

  const auto split = kfold_split(y.size(), folds, seed);
  std::vector<double> lr_rmse(folds), knn_rmse(folds);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(folds); ++f) {
    const auto& test = split[f];
    const auto train_idx = complement(y.size(), test);
    const auto xtr = x.select(train_idx);
    const auto ytr = pick<double>(y, train_idx);
    const auto xte = x.select(test);

    const auto lr_pred = linreg_fit_predict(xtr, ytr, xte);
    const std::size_t k = std::min(kNeighbours, xtr.rows);
    double lr_sq = 0, knn_sq = 0;
    for (std::size_t t = 0; t < test.size(); ++t) {
      const double truth = y[test[t]];
      lr_sq += (lr_pred[t] - truth) * (lr_pred[t] - truth);
      const double kp = knn_regress(xtr, ytr, xte.row(t), k);
      knn_sq += (kp - truth) * (kp - truth);
    }
    lr_rmse[f] = std::sqrt(lr_sq / test.size());
    knn_rmse[f] = std::sqrt(knn_sq / test.size());
  }
  report.metrics = {{"linear_regression", "rmse", mean(lr_rmse)},
                    {"knn", "rmse", mean(knn_rmse)},
                    {"m5_rules", "rmse", std::nullopt}};
  return report;
}

EvalReport run_entity_ranking(const EmbeddingModel& m, const RankingDataset& ds) {
  EvalReport report;
  report.task = "entity_ranking";
  report.dataset = ds.name;
  std::vector<double> scores;
  for (const auto& g : ds.groups) {
    const auto main = m.find(g.main);
    if (!main) throw UnknownMainEntityError(g.main);
    std::vector<double> cosines, gold;
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      if (auto v = m.find(g.candidates[i])) {
        cosines.push_back(cosine(*main, *v));
        gold.push_back(-static_cast<double>(i));  // earlier in gold order = more related
      } else {
        ++report.dropped;
      }
    }
    GroupResult res{g.main, cosines.size(), std::nullopt};
    if (cosines.size() >= 2) {
      try {
        res.spearman = spearman(cosines, gold);
        scores.push_back(*res.spearman);
      } catch (const ZeroVarianceError&) {
        // all candidates equidistant from the main entity: no ranking
      }
    }
    report.evaluated += cosines.size();
    report.groups.push_back(std::move(res));
  }
  report.metrics = {{"cosine", "spearman", scores.empty() ? std::nullopt : std::optional<double>(mean(scores))}};
  return report;
}

EvalReport run_docsim(const EmbeddingModel& m, const DocSimDataset& ds) {
  EvalReport report;
  report.task = "docsim";
  report.dataset = ds.name;
  std::vector<double> predicted, gold;
  for (const auto& pair : ds.gold) {
    const auto d1 = lookup(m, ds.documents.at(pair.first));
    const auto d2 = lookup(m, ds.documents.at(pair.second));
    if (d1.empty() || d2.empty()) {
      ++report.dropped;
      continue;
    }
    predicted.push_back(document_similarity(std::span<const std::span<const float>>(d1),
                                            std::span<const std::span<const float>>(d2)));
    gold.push_back(pair.score);
  }
  report.evaluated = predicted.size();
  if (predicted.size() < 2) throw TooFewRecordsError(ds.name + ": fewer than 2 scorable document pairs");

  std::optional<double> r, rho, hm;
  try {
    r = pearson(predicted, gold);
    rho = spearman(predicted, gold);
    hm = harmonic_mean(*r, *rho);
  } catch (const ZeroVarianceError&) {
  }
  report.metrics = {{"cosine", "pearson", r}, {"cosine", "spearman", rho}, {"cosine", "harmonic_mean", hm}};
  return report;
}

void write_eval_report(const EvalReport& r, std::ostream& out) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << *v;
    return s.str();
  };
  out << "Task: " << r.task << "   Dataset: " << r.dataset;
  if (!r.model.empty()) out << "   Model: " << r.model;
  out << '\n';
  out << std::left << std::setw(20) << "Learner" << std::setw(16) << "Metric" << std::right << std::setw(10)
      << "Value" << '\n';
  for (const auto& m : r.metrics)
    out << std::left << std::setw(20) << m.learner << std::setw(16) << m.name << std::right << std::setw(10)
        << fmt(m.value) << '\n';
  for (const auto& g : r.groups)
    out << "  group " << g.main << "  candidates=" << g.candidates << "  spearman=" << fmt(g.spearman) << '\n';
  out << '\n';

  out << "task=" << r.task << '\n' << "dataset=" << r.dataset << '\n';
  if (!r.model.empty()) out << "model=" << r.model << '\n';
  if (r.folds) out << "folds=" << r.folds << '\n' << "seed=" << r.seed << '\n';
  out << "evaluated=" << r.evaluated << '\n' << "dropped=" << r.dropped << '\n';
  for (const auto& m : r.metrics) {
    out << m.learner << '.' << m.name << '=';
    if (m.value)
      out << std::setprecision(17) << *m.value;
    else
      out << "n/a";
    out << '\n';
  }
}

}  // namespace kgmat
