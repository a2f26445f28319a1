#include "procal/grouping.hpp"

#include <algorithm>
#include <limits>

#include "procal/errors.hpp"
#include "procal/rng.hpp"

namespace procal {

double pairwise_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ArityMismatch(a.size(), b.size());
  return (a - b).norm();
}

double pairwise_distance(const Record& a, const Record& b) {
  return pairwise_distance(a.values, b.values);
}

Grouping group_by_size(const Matrix& values, Index kprime,
                       std::uint64_t seed) {
  if (kprime < 2) throw InvalidGroupSize(kprime);
  const Index m = values.rows();
  if (m == 0) throw EmptyDataset();

  Rng rng(seed);
  std::vector<Index> remaining(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) remaining[static_cast<std::size_t>(i)] = i;

  Grouping g;
  g.assignment.assign(static_cast<std::size_t>(m), -1);
  std::vector<std::pair<double, Index>> ranked;

  while (!remaining.empty()) {
    const std::size_t pick = rng.index(remaining.size());
    const Index pivot = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

    ranked.clear();
    ranked.reserve(remaining.size());
    for (Index r : remaining) {
      ranked.emplace_back((values.row(r) - values.row(pivot)).norm(), r);
    }
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(kprime) - 1,
                              ranked.size());
    std::partial_sort(ranked.begin(),
                      ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end());

    std::vector<Index> members;
    members.reserve(take + 1);
    members.push_back(pivot);
    for (std::size_t j = 0; j < take; ++j) members.push_back(ranked[j].second);

    const Index gi = static_cast<Index>(g.groups.size());
    for (Index r : members) {
      g.assignment[static_cast<std::size_t>(r)] = gi;
    }
    // remove the selected neighbors, keeping ascending order
    if (take > 0) {
      std::vector<Index> taken(members.begin() + 1, members.end());
      std::sort(taken.begin(), taken.end());
      std::vector<Index> next;
      next.reserve(remaining.size() - take);
      std::size_t t = 0;
      for (Index r : remaining) {
        if (t < taken.size() && taken[t] == r) {
          ++t;
        } else {
          next.push_back(r);
        }
      }
      remaining.swap(next);
    }
    g.pivots.push_back(pivot);
    g.groups.push_back(std::move(members));
  }
  return g;
}

namespace {

// Squared distance of every record to every centroid, then argmin per row
// with ties to the lowest centroid index.
void assign_nearest(const Matrix& values, const Matrix& centroids,
                    std::vector<Index>& assignment, double* wcss) {
  const Index m = values.rows();
  const Index k = centroids.rows();
  const Vector rn = values.rowwise().squaredNorm();
  const Vector cn = centroids.rowwise().squaredNorm();
  const Matrix cross = values * centroids.transpose();  // m x k
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < k; ++c) {
      const double d = rn[i] + cn[c] - 2.0 * cross(i, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignment[static_cast<std::size_t>(i)] = best;
    total += std::max(best_d, 0.0);
  }
  if (wcss) *wcss = total;
}

Matrix seed_centroids(const Matrix& values, Index k, Rng& rng) {
  const Index m = values.rows();
  Matrix centroids(k, values.cols());
  centroids.row(0) = values.row(static_cast<Index>(rng.index(
      static_cast<std::size_t>(m))));

  Vector d2 = (values.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index chosen;
    if (total <= 0.0) {
      chosen = static_cast<Index>(rng.index(static_cast<std::size_t>(m)));
    } else {
      double target = rng.uniform() * total;
      chosen = m - 1;
      for (Index i = 0; i < m; ++i) {
        target -= d2[i];
        if (target <= 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centroids.row(c) = values.row(chosen);
    d2 = d2.cwiseMin(
        (values.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

}  // namespace

Grouping group_by_kmeans(const Matrix& values, Index k, std::uint64_t seed,
                         int max_iter, std::vector<double>* wcss_trace) {
  const Index m = values.rows();
  if (m == 0) throw EmptyDataset();
  if (k < 1 || k > m) throw InvalidClusterCount(k, m);

  Rng rng(seed);
  Matrix centroids = seed_centroids(values, k, rng);

  std::vector<Index> assignment(static_cast<std::size_t>(m), -1);
  std::vector<Index> previous;
  if (wcss_trace) wcss_trace->clear();

  for (int iter = 0; iter < max_iter; ++iter) {
    double wcss = 0.0;
    assign_nearest(values, centroids, assignment, &wcss);
    if (wcss_trace) wcss_trace->push_back(wcss);
    if (assignment == previous) break;
    previous = assignment;

    Matrix sums = Matrix::Zero(k, values.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < m; ++i) {
      const Index c = assignment[static_cast<std::size_t>(i)];
      sums.row(c) += values.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < k; ++c) {
      const Index n = counts[static_cast<std::size_t>(c)];
      if (n > 0) centroids.row(c) = sums.row(c) / static_cast<double>(n);
      // empty cluster: centroid kept; dropped from the output below
    }
  }

  Grouping g;
  std::vector<Index> remap(static_cast<std::size_t>(k), -1);
  g.assignment.resize(static_cast<std::size_t>(m));
  for (Index c = 0; c < k; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < m; ++i) {
      if (assignment[static_cast<std::size_t>(i)] == c) members.push_back(i);
    }
    if (members.empty()) continue;
    remap[static_cast<std::size_t>(c)] = static_cast<Index>(g.groups.size());
    g.groups.push_back(std::move(members));
  }
  for (Index i = 0; i < m; ++i) {
    g.assignment[static_cast<std::size_t>(i)] =
        remap[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
  }
  return g;
}

Grouping group(const Matrix& values, const GroupingConfig& cfg) {
  if (cfg.mode == GroupingMode::by_cluster_count) {
    return group_by_kmeans(values, cfg.k, cfg.seed, cfg.max_kmeans_iterations);
  }
  return group_by_size(values, cfg.kprime, cfg.seed);
}

}  // namespace procal
