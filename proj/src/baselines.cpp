#include "procal/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "procal/errors.hpp"
#include "procal/grouping.hpp"
#include "procal/metrics.hpp"
#include "procal/rng.hpp"
#include "procal/spectral.hpp"

namespace procal {

PerturbResult perturb_condensation(const Dataset& d,
                                   const CondensationConfig& cfg) {
  const Index m = d.rows();
  const Index n = d.cols();
  if (m == 0) throw EmptyDataset();
  if (cfg.group_size < 2) throw InvalidGroupSize(cfg.group_size);

  Grouping grouping =
      group_by_size(d.values, cfg.group_size, derive_seed(cfg.seed, "grouping"));

  PerturbResult result;
  result.data.schema = d.schema;
  result.data.label_name = d.label_name;
  result.data.label_column = d.label_column;
  result.data.values.resize(m, n);
  if (d.has_labels()) result.data.labels.resize(static_cast<std::size_t>(m));

  Index at = 0;
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(m));

  for (std::size_t gi = 0; gi < grouping.groups.size(); ++gi) {
    const auto& members = grouping.groups[gi];
    const Index size = static_cast<Index>(members.size());

    Matrix sub(size, n);
    for (Index i = 0; i < size; ++i) {
      sub.row(i) = d.values.row(members[static_cast<std::size_t>(i)]);
    }
    const ColumnStats stats = column_stats(sub);
    const Vector centroid = stats.sums / static_cast<double>(size);
    const EigenSystemX e = eigendecompose(covariance_from_stats(stats));

    // uniform with variance lambda_j along eigenvector v_j
    Vector half_width(n);
    for (Index j = 0; j < n; ++j) {
      half_width[j] = std::sqrt(3.0 * std::max(e.eigenvalues[j], 0.0));
    }

    Rng rng(derive_seed(cfg.seed, "dc-sample", gi));
    for (Index i = 0; i < size; ++i) {
      Vector u(n);
      for (Index j = 0; j < n; ++j) {
        u[j] = rng.uniform(-half_width[j], half_width[j]);
      }
      result.data.values.row(at + i) =
          (centroid + e.eigenvectors * u).transpose();
    }

    if (d.has_labels()) {
      std::vector<Index> shuffled(members.begin(), members.end());
      Rng lrng(derive_seed(cfg.seed, "dc-labels", gi));
      lrng.shuffle(shuffled);
      for (Index i = 0; i < size; ++i) {
        result.data.labels[static_cast<std::size_t>(at + i)] =
            d.labels[static_cast<std::size_t>(
                shuffled[static_cast<std::size_t>(i)])];
      }
    }

    order.insert(order.end(), members.begin(), members.end());
    at += size;
  }

  if (cfg.with_provenance) {
    result.provenance = std::move(order);
    result.groups = std::move(grouping.groups);
  }
  return result;
}

PerturbResult perturb_random_rotation(const Dataset& d,
                                      const RandomRotationConfig& cfg,
                                      RandomRotationDiagnostics* diag) {
  const Index m = d.rows();
  const Index n = d.cols();
  if (m == 0) throw EmptyDataset();

  auto [normalized, params] = zscore_normalize(d.values);
  const Matrix& base = cfg.rotate_raw ? d.values : normalized;

  Matrix best;
  double best_score = -1.0;
  int winner = -1;
  if (diag) diag->candidate_scores.resize(cfg.iterations);

  for (int it = 0; it < cfg.iterations; ++it) {
    Rng rng(derive_seed(cfg.seed, "rp-candidate",
                        static_cast<std::uint64_t>(it)));
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) g(i, j) = cfg.sigma * rng.normal();
    }
    const Matrix candidate = orthonormalize(Matrix::Identity(n, n) + g);

    const Matrix rotated = base * candidate.transpose();
    const double score = normalized_difference_std(base, rotated).minCoeff();
    if (diag) diag->candidate_scores[it] = score;
    if (score > best_score) {
      best_score = score;
      best = candidate;
      winner = it;
    }
  }
  if (diag) diag->winner = winner;

  PerturbResult result;
  result.data.schema = d.schema;
  result.data.labels = d.labels;
  result.data.label_name = d.label_name;
  result.data.label_column = d.label_column;
  const Matrix rotated = base * best.transpose();
  result.data.values =
      cfg.rotate_raw ? rotated : invert_normalization(params, rotated);
  result.last_rotation = best;
  if (cfg.with_provenance) {
    result.provenance.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      result.provenance[static_cast<std::size_t>(i)] = i;
    }
  }
  return result;
}

}  // namespace procal
