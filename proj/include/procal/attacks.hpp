#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/metrics.hpp"
#include "procal/perturb.hpp"
#include "procal/types.hpp"

namespace procal {

/// Resilience metrics for one perturbation method: the std of the
/// normalized difference between the original data and what each attack
/// recovers, minimum and average across attributes. Higher is harder to
/// reconstruct.
struct AttackReport {
  std::string method;
  double ni_min = 0, ni_avg = 0;
  double ica_min = 0, ica_avg = 0;
  double io_min = 0, io_avg = 0;
  bool ica_fully_converged = true;
};

struct KnownPairs {
  double fraction = 0.10;
  std::vector<Index> rows;  // original-row indices known to the adversary
  Matrix original;          // z-scored known originals
  Matrix perturbed;         // z-scored matching perturbed rows
};

/// Samples the adversary's known rows uniformly without replacement. The
/// adversary is granted correct pairings, so the resulting resilience
/// numbers are conservative.
KnownPairs sample_known_pairs(const Matrix& original_norm,
                              const Matrix& perturbed_norm_aligned,
                              double fraction, std::uint64_t seed);

/// Naive inference: how close do perturbed values sit to the originals.
/// Inputs must be row-aligned.
MinAvg naive_inference(const Matrix& original, const Matrix& perturbed_aligned);

struct KnownIoResult {
  Matrix reconstructed;  // in z-score space, row-aligned with the original
  MinAvg metric;
};

/// Known input/output attack: least-squares fit of one global linear map
/// over the known pairs, inverted (pseudo-inverse when singular) across
/// all rows. Never aborts on rank deficiency.
KnownIoResult known_io_attack(const Matrix& original,
                              const Matrix& perturbed_aligned,
                              const KnownPairs& known);

struct FastIcaParams {
  int max_iter = 200;
  double tol = 1e-4;
  std::uint64_t seed = 0;
};

struct FastIcaResult {
  Matrix sources;     // rows = samples, one column per recovered component
  Matrix unmixing;    // applies to whitened data
  Matrix mixing;      // least-squares map from sources back to observations
  std::vector<bool> converged;  // per component
  Index components = 0;
};

/// Centers and decorrelates to unit variance. Directions with vanishing
/// eigenvalues are dropped, so fewer than `components` columns may come
/// back.
Matrix whiten(const Matrix& observations, Index components);

/// Deflationary fixed-point ICA with the tanh contrast. Components that
/// fail to converge are flagged and returned as-is.
FastIcaResult fast_ica(const Matrix& observations, Index components,
                       const FastIcaParams& params = {});

struct IcaAttackResult {
  Matrix reconstructed;  // z-score space, aligned to original attributes
  MinAvg metric;
  std::vector<Index> component_of_attribute;  // -1 when unmatched
  bool fully_converged = true;
};

/// ICA reconstruction attack: recover independent components from the
/// perturbed data, match each original attribute to its best component by
/// greedy maximum absolute correlation (a bijection), and rescale to the
/// reference attribute's scale. Inputs must be row-aligned.
IcaAttackResult ica_attack(const Matrix& original,
                           const Matrix& perturbed_aligned,
                           const FastIcaParams& params = {});

/// Runs all three attacks against one perturbation and fills a report.
/// Requires provenance to align rows.
AttackReport evaluate_attacks(const std::string& method_name,
                              const Dataset& original,
                              const PerturbResult& perturbed,
                              double known_fraction, std::uint64_t seed);

}  // namespace procal
