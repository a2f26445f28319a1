#pragma once

#include <cstdint>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/types.hpp"

namespace procal {

enum class GroupingMode {
  by_group_size,     // fixed-size nearest-neighbor groups around random pivots
  by_cluster_count,  // k-means clusters
};

struct GroupingConfig {
  GroupingMode mode = GroupingMode::by_group_size;
  Index k = 0;       // cluster count (by_cluster_count)
  Index kprime = 0;  // group size (by_group_size), >= 2
  std::uint64_t seed = 0;
  int max_kmeans_iterations = 100;
};

/// A partition of record indices into homogeneous groups. Every record
/// index appears in exactly one group.
struct Grouping {
  std::vector<std::vector<Index>> groups;
  std::vector<Index> assignment;  // record index -> group index
  std::vector<Index> pivots;      // by_group_size only: pivot record per
                                  // group, in formation order
};

/// Euclidean distance over attribute values.
double pairwise_distance(const Record& a, const Record& b);
double pairwise_distance(const Vector& a, const Vector& b);

/// Forms groups of exactly `kprime` records (the final group may be
/// smaller): repeatedly samples a pivot uniformly from the remaining
/// records and pulls in its kprime-1 nearest remaining neighbors.
/// Distance ties resolve to the lowest record index.
Grouping group_by_size(const Matrix& values, Index kprime, std::uint64_t seed);

/// Lloyd k-means with distance-weighted random seeding. Stops at an
/// assignment fixed point or after max_iter rounds. Empty clusters are
/// dropped, so fewer than k groups may come back. `wcss_trace`, when
/// given, receives the within-cluster sum of squares after every
/// assignment step.
Grouping group_by_kmeans(const Matrix& values, Index k, std::uint64_t seed,
                         int max_iter = 100,
                         std::vector<double>* wcss_trace = nullptr);

/// Dispatches on cfg.mode.
Grouping group(const Matrix& values, const GroupingConfig& cfg);

}  // namespace procal
