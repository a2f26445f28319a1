#include "procal/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "procal/errors.hpp"
#include "procal/rng.hpp"
#include "procal/spectral.hpp"

namespace procal {

namespace {

constexpr double kIdentityTol = 1e-9;

bool is_identity(const Matrix& r) {
  return (r - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff() <=
         kIdentityTol;
}

// A covariance matrix counts as zero when it vanishes relative to the
// group's second moments; such groups (duplicates, singletons) would get
// an identity eigenbasis and must go through the fallback instead.
bool is_zero_covariance(const Matrix& c, const ColumnStats& stats) {
  const double scale =
      stats.product_sums.diagonal().cwiseAbs().maxCoeff() /
      static_cast<double>(stats.count);
  return c.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale);
}

// Rotation for one group: decompose, shuffle columns, and redraw the
// permutation if the shuffle happened to land on the identity matrix.
// For n = 1 the only non-identity choice is a sign flip.
Matrix rotation_for_group(const Matrix& members, std::uint64_t seed) {
  const Index n = members.cols();
  if (n == 1) return -Matrix::Identity(1, 1);

  const EigenSystemX e = eigendecompose(covariance_from_stats(
      column_stats(members)));
  for (int attempt = 0; attempt < 64; ++attempt) {
    RotationMatrixX r =
        shuffle_columns(e, derive_seed(seed, "shuffle-attempt",
                                       static_cast<std::uint64_t>(attempt)));
    if (!is_identity(r.entries)) return std::move(r.entries);
  }
  // only reachable when the eigenbasis is (numerically) the identity and
  // every drawn permutation fixed it; flip one axis
  Matrix r = e.eigenvectors;
  r.col(0) = -r.col(0);
  return r;
}

}  // namespace

PerturbResult perturb_static(const Dataset& d, const PerturbConfig& cfg) {
  const Index m = d.rows();
  const Index n = d.cols();
  if (m == 0) throw EmptyDataset();

  GroupingConfig gcfg = cfg.grouping;
  gcfg.seed = derive_seed(cfg.seed, "grouping");
  Grouping grouping = group(d.values, gcfg);

  Matrix rotated(m, n);
  Matrix last_rotation;
  std::vector<Index> pending;  // groups waiting for a fallback matrix
  std::vector<Matrix> applied;
  if (cfg.with_provenance) applied.resize(grouping.groups.size());

  auto rotate_group = [&](Index gi, const Matrix& rotation) {
    const auto& members = grouping.groups[static_cast<std::size_t>(gi)];
    for (Index r : members) {
      rotated.row(r) = d.values.row(r) * rotation.transpose();
    }
    if (cfg.with_provenance) {
      applied[static_cast<std::size_t>(gi)] = rotation;
    }
  };

  for (std::size_t gi = 0; gi < grouping.groups.size(); ++gi) {
    const auto& members = grouping.groups[gi];
    const Index size = static_cast<Index>(members.size());

    bool needs_fallback =
        size < static_cast<Index>(cfg.fallback_min_group_size);
    Matrix sub;
    if (!needs_fallback) {
      sub.resize(size, n);
      for (Index i = 0; i < size; ++i) {
        sub.row(i) = d.values.row(members[static_cast<std::size_t>(i)]);
      }
      const ColumnStats stats = column_stats(sub);
      needs_fallback =
          is_zero_covariance(covariance_from_stats(stats), stats) && n > 1;
    }

    if (needs_fallback) {
      if (last_rotation.size() == 0) {
        pending.push_back(static_cast<Index>(gi));
      } else {
        rotate_group(static_cast<Index>(gi), last_rotation);
      }
      continue;
    }

    const Matrix rotation = rotation_for_group(
        sub, derive_seed(cfg.seed, "rotation", gi));
    rotate_group(static_cast<Index>(gi), rotation);
    last_rotation = rotation;
  }

  if (!pending.empty()) {
    if (last_rotation.size() == 0) {
      // every group was degenerate; never emit records verbatim
      if (cfg.carried_rotation.size() != 0) {
        last_rotation = cfg.carried_rotation;
      } else {
        Rng rng(derive_seed(cfg.seed, "fallback-rotation"));
        last_rotation = random_orthogonal(n, rng);
        if (is_identity(last_rotation)) {
          last_rotation.col(0) = -last_rotation.col(0);
        }
      }
    }
    for (Index gi : pending) rotate_group(gi, last_rotation);
  }

  // merge in group order, then shuffle rows
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(m));
  for (const auto& members : grouping.groups) {
    order.insert(order.end(), members.begin(), members.end());
  }
  if (cfg.shuffle_rows) {
    Rng rng(derive_seed(cfg.seed, "row-shuffle"));
    rng.shuffle(order);
  }

  PerturbResult result;
  result.data.schema = d.schema;
  result.data.label_name = d.label_name;
  result.data.label_column = d.label_column;
  result.data.values.resize(m, n);
  if (d.has_labels()) result.data.labels.resize(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    result.data.values.row(j) = rotated.row(src);
    if (d.has_labels()) {
      result.data.labels[static_cast<std::size_t>(j)] =
          d.labels[static_cast<std::size_t>(src)];
    }
  }
  result.last_rotation = last_rotation;
  if (cfg.with_provenance) {
    result.provenance = std::move(order);
    result.groups = std::move(grouping.groups);
    result.group_rotations = std::move(applied);
  }
  return result;
}

Matrix align_to_original(const Matrix& perturbed,
                         const std::vector<Index>& provenance) {
  if (provenance.size() != static_cast<std::size_t>(perturbed.rows())) {
    throw ProvenanceMissing();
  }
  Matrix aligned(perturbed.rows(), perturbed.cols());
  for (Index j = 0; j < perturbed.rows(); ++j) {
    aligned.row(provenance[static_cast<std::size_t>(j)]) = perturbed.row(j);
  }
  return aligned;
}

DisplacementReport perturbation_displacement(const Dataset& original,
                                             const PerturbResult& perturbed) {
  const Matrix aligned =
      align_to_original(perturbed.data.values, perturbed.provenance);
  DisplacementReport r;
  r.per_attribute = normalized_difference_std(original.values, aligned);
  const MinAvg ma = min_avg(r.per_attribute);
  r.min = ma.min;
  r.avg = ma.avg;
  return r;
}

}  // namespace procal
