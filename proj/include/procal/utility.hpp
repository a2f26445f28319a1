#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/types.hpp"

namespace procal {

struct CVConfig {
  int folds = 10;
  int knn_k = 1;
  std::uint64_t seed = 0;
  bool normalize = false;  // z-score features before classification
};

struct UtilityReport {
  std::string method;
  double accuracy = 0.0;                 // correct predictions / m, exactly
  std::vector<double> fold_accuracies;
  std::vector<Index> fold_sizes;
};

/// Majority label among the k nearest training records by Euclidean
/// distance. Vote ties break to the label with the smallest summed
/// distance, then lexicographically.
std::string knn_classify(const Dataset& train, const Record& query, int k);

/// Seeded stratified k-fold cross-validation of a kNN classifier. Every
/// record lands in exactly one test fold; classes are balanced across
/// folds to within one record.
UtilityReport cross_validate(const Dataset& d, const CVConfig& cfg);

/// The stratified fold assignment used by cross_validate (record index ->
/// fold), exposed for inspection.
std::vector<int> stratified_folds(const Dataset& d, int folds,
                                  std::uint64_t seed);

struct UtilityComparison {
  std::vector<UtilityReport> columns;  // "original" first, then one per method
};

/// Cross-validates the original dataset and each pre-perturbed variant
/// with the same fold seed.
UtilityComparison utility_comparison(
    const Dataset& original,
    const std::vector<std::pair<std::string, Dataset>>& perturbed_variants,
    const CVConfig& cfg);

}  // namespace procal
