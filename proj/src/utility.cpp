#include "procal/utility.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "procal/errors.hpp"
#include "procal/rng.hpp"

namespace procal {

namespace {

// vote among the k nearest (distance, train-index) candidates
std::string vote(const std::vector<std::pair<double, Index>>& nearest,
                 const std::vector<std::string>& labels) {
  std::map<std::string, std::pair<int, double>> tally;  // label -> (count, dist sum)
  for (const auto& [dist, idx] : nearest) {
    auto& t = tally[labels[static_cast<std::size_t>(idx)]];
    t.first += 1;
    t.second += dist;
  }
  const std::string* best = nullptr;
  for (const auto& [label, t] : tally) {
    if (!best) {
      best = &label;
      continue;
    }
    const auto& b = tally.at(*best);
    if (t.first > b.first ||
        (t.first == b.first && t.second < b.second)) {
      best = &label;
    }
    // equal count and equal summed distance: std::map order keeps the
    // lexicographically smaller label
  }
  return *best;
}

}  // namespace

std::string knn_classify(const Dataset& train, const Record& query, int k) {
  if (!train.has_labels()) throw NoLabels();
  if (train.rows() == 0) throw EmptyDataset();
  if (query.values.size() != train.cols()) {
    throw ArityMismatch(train.cols(), query.values.size());
  }
  k = std::min<int>(k, static_cast<int>(train.rows()));

  std::vector<std::pair<double, Index>> ranked;
  ranked.reserve(static_cast<std::size_t>(train.rows()));
  for (Index i = 0; i < train.rows(); ++i) {
    ranked.emplace_back((train.values.row(i) - query.values.transpose()).norm(),
                        i);
  }
  std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());
  ranked.resize(static_cast<std::size_t>(k));
  return vote(ranked, train.labels);
}

std::vector<int> stratified_folds(const Dataset& d, int folds,
                                  std::uint64_t seed) {
  if (!d.has_labels()) throw NoLabels();
  if (d.rows() < folds) throw TooFewRecords(d.rows(), folds);

  std::map<std::string, std::vector<Index>> by_class;
  for (Index i = 0; i < d.rows(); ++i) {
    by_class[d.labels[static_cast<std::size_t>(i)]].push_back(i);
  }

  Rng rng(derive_seed(seed, "cv-folds"));
  std::vector<int> fold_of(static_cast<std::size_t>(d.rows()), 0);
  int offset = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      fold_of[static_cast<std::size_t>(members[i])] =
          (offset + static_cast<int>(i)) % folds;
    }
    offset = (offset + static_cast<int>(members.size())) % folds;
  }
  return fold_of;
}

UtilityReport cross_validate(const Dataset& d, const CVConfig& cfg) {
  if (!d.has_labels()) throw NoLabels();
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (cfg.knn_k < 1) throw ConfigError("knn k must be >= 1");
  if (d.rows() < cfg.folds) throw TooFewRecords(d.rows(), cfg.folds);

  Matrix features = d.values;
  if (cfg.normalize) features = zscore_normalize(d.values).first;

  const std::vector<int> fold_of = stratified_folds(d, cfg.folds, cfg.seed);
  const Index m = d.rows();

  UtilityReport report;
  report.fold_accuracies.resize(static_cast<std::size_t>(cfg.folds));
  report.fold_sizes.resize(static_cast<std::size_t>(cfg.folds));
  Index total_correct = 0;

  for (int f = 0; f < cfg.folds; ++f) {
    std::vector<Index> train_idx, test_idx;
    for (Index i = 0; i < m; ++i) {
      (fold_of[static_cast<std::size_t>(i)] == f ? test_idx : train_idx)
          .push_back(i);
    }
    const Index mt = static_cast<Index>(train_idx.size());
    const Index q = static_cast<Index>(test_idx.size());
    report.fold_sizes[static_cast<std::size_t>(f)] = q;
    if (q == 0) continue;

    Matrix train(mt, features.cols());
    for (Index i = 0; i < mt; ++i) {
      train.row(i) = features.row(train_idx[static_cast<std::size_t>(i)]);
    }
    Matrix queries(q, features.cols());
    for (Index i = 0; i < q; ++i) {
      queries.row(i) = features.row(test_idx[static_cast<std::size_t>(i)]);
    }

    // squared distances via one matrix product
    const Vector tn = train.rowwise().squaredNorm();
    const Vector qn = queries.rowwise().squaredNorm();
    const Matrix cross = queries * train.transpose();  // q x mt

    const int k = std::min<int>(cfg.knn_k, static_cast<int>(mt));
    Index correct = 0;
    std::vector<std::pair<double, Index>> ranked;
    for (Index i = 0; i < q; ++i) {
      ranked.clear();
      ranked.reserve(static_cast<std::size_t>(mt));
      for (Index j = 0; j < mt; ++j) {
        const double d2 = std::max(qn[i] + tn[j] - 2.0 * cross(i, j), 0.0);
        ranked.emplace_back(d2, train_idx[static_cast<std::size_t>(j)]);
      }
      std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());
      ranked.resize(static_cast<std::size_t>(k));
      for (auto& r : ranked) r.first = std::sqrt(r.first);  // vote uses sums
      const std::string predicted = vote(ranked, d.labels);
      if (predicted == d.labels[static_cast<std::size_t>(
                           test_idx[static_cast<std::size_t>(i)])]) {
        ++correct;
      }
    }
    report.fold_accuracies[static_cast<std::size_t>(f)] =
        static_cast<double>(correct) / static_cast<double>(q);
    total_correct += correct;
  }

  report.accuracy = static_cast<double>(total_correct) / static_cast<double>(m);
  return report;
}

UtilityComparison utility_comparison(
    const Dataset& original,
    const std::vector<std::pair<std::string, Dataset>>& perturbed_variants,
    const CVConfig& cfg) {
  UtilityComparison table;
  UtilityReport base = cross_validate(original, cfg);
  base.method = "original";
  table.columns.push_back(std::move(base));
  for (const auto& [name, data] : perturbed_variants) {
    UtilityReport r = cross_validate(data, cfg);
    r.method = name;
    table.columns.push_back(std::move(r));
  }
  return table;
}

}  // namespace procal
