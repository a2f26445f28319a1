#pragma once

#include <cstdint>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/grouping.hpp"
#include "procal/metrics.hpp"
#include "procal/types.hpp"

namespace procal {

struct PerturbConfig {
  GroupingConfig grouping;
  std::uint64_t seed = 0;

  /// Groups at least this large get their own rotation; smaller ones are
  /// rotated with the most recently generated matrix instead.
  int fallback_min_group_size = 2;

  /// The final uniform row shuffle. Stream chunks disable it and shuffle
  /// whole release blocks instead.
  bool shuffle_rows = true;

  /// Keep the map from output rows back to input records (and the group
  /// memberships). Off in production: the alignment is itself a leak.
  bool with_provenance = false;

  /// Rotation to fall back on when no group in this dataset can produce
  /// one (used by stream sessions to carry the last matrix across
  /// chunks). Empty means generate a seeded random orthogonal matrix.
  Matrix carried_rotation;
};

struct PerturbResult {
  Dataset data;
  /// with_provenance only: provenance[j] = input record index of output
  /// row j.
  std::vector<Index> provenance;
  /// with_provenance only: input record indices per group, in processing
  /// order.
  std::vector<std::vector<Index>> groups;
  /// with_provenance only: the rotation actually applied to each group
  /// (fallback groups record the matrix they borrowed).
  std::vector<Matrix> group_rotations;
  /// The last rotation matrix generated from a group (or the fallback
  /// that stood in for one). Empty when rows were never rotated.
  Matrix last_rotation;
};

/// Rotation-based condensation for a static dataset: group, rotate each
/// group by its column-shuffled covariance eigenbasis, rotate degenerate
/// groups (singletons, duplicate-only groups) with the most recent
/// matrix from a regular group, merge, and shuffle the rows. Labels ride
/// along with their rows; no numeric value survives unrotated.
PerturbResult perturb_static(const Dataset& d, const PerturbConfig& cfg);

struct DisplacementReport {
  Vector per_attribute;  // std of normalized original minus normalized
                         // perturbed, per attribute
  double min = 0.0;
  double avg = 0.0;
};

/// How far the perturbed rows moved from the originals, on the common
/// z-score scale. Needs provenance to align rows across the shuffle.
DisplacementReport perturbation_displacement(const Dataset& original,
                                             const PerturbResult& perturbed);

/// Reorders perturbed rows back into input order using the provenance
/// map. Shared by the displacement and attack harnesses.
Matrix align_to_original(const Matrix& perturbed,
                         const std::vector<Index>& provenance);

}  // namespace procal
