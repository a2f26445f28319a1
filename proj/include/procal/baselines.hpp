#pragma once

#include <cstdint>

#include "procal/dataset.hpp"
#include "procal/perturb.hpp"
#include "procal/types.hpp"

namespace procal {

struct CondensationConfig {
  Index group_size = 0;  // k', >= 2
  std::uint64_t seed = 0;
  bool with_provenance = false;
};

struct RandomRotationConfig {
  int iterations = 10;
  double sigma = 0.3;
  std::uint64_t seed = 0;
  bool rotate_raw = false;  // rotate raw values instead of z-scored ones
  bool with_provenance = false;
};

/// Candidate scores from the random-rotation search, for inspection.
struct RandomRotationDiagnostics {
  Vector candidate_scores;  // minimum displacement std per candidate
  int winner = -1;
};

/// Data condensation: replaces each fixed-size homogeneous group with
/// synthetic records drawn around the group centroid, uniform along each
/// covariance eigendirection with variance matched to the eigenvalue.
/// Labels are redistributed within the group. Provenance is positional
/// (synthetic record i stands in for group member i).
PerturbResult perturb_condensation(const Dataset& d,
                                   const CondensationConfig& cfg);

/// Random rotation perturbation: draws `iterations` orthonormalized
/// candidates (identity plus sigma-scaled Gaussian noise, then QR),
/// scores each by its minimum per-attribute displacement std, and applies
/// the best to the whole z-scored dataset before mapping back to the
/// original scale. One global isometry; rows stay in place.
PerturbResult perturb_random_rotation(const Dataset& d,
                                      const RandomRotationConfig& cfg,
                                      RandomRotationDiagnostics* diag = nullptr);

}  // namespace procal
