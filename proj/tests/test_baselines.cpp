#include <doctest.h>

#include <algorithm>
#include <set>

#include "procal/baselines.hpp"
#include "procal/errors.hpp"
#include "procal/metrics.hpp"
#include "procal/rng.hpp"
#include "procal/spectral.hpp"
#include "procal/synthetic.hpp"

using namespace procal;

TEST_SUITE("baselines") {

TEST_CASE("condensation of identical records returns the centroid") {
  Dataset d;
  d.values.resize(6, 3);
  for (Index i = 0; i < 6; ++i) d.values.row(i) << 2, -4, 9;
  d.schema = {"a0", "a1", "a2"};

  CondensationConfig cfg;
  cfg.group_size = 6;
  cfg.seed = 3;
  const PerturbResult r = perturb_condensation(d, cfg);
  for (Index i = 0; i < 6; ++i) {
    CHECK((r.data.values.row(i) - d.values.row(0)).cwiseAbs().maxCoeff() <=
          1e-9);
  }
}

TEST_CASE("condensation rejects undersized groups and empty data") {
  Dataset d = make_gaussian(10, 2, 1);
  CondensationConfig cfg;
  cfg.group_size = 1;
  CHECK_THROWS_AS(perturb_condensation(d, cfg), InvalidGroupSize);
}

TEST_CASE("condensation preserves the group centroid in expectation") {
  // one fixed group; the synthetic mean should stay within the
  // 3-sigma sampling bound in nearly every seed
  const Dataset d = make_gaussian(200, 3, 5);
  const ColumnStats stats = column_stats(d.values);
  const Vector centroid = stats.sums / 200.0;
  const EigenSystemX e = eigendecompose(covariance_from_stats(stats));

  int ok = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    CondensationConfig cfg;
    cfg.group_size = 200;
    cfg.seed = static_cast<std::uint64_t>(t);
    const PerturbResult r = perturb_condensation(d, cfg);
    const Vector mean = r.data.values.colwise().mean();
    bool inside = true;
    for (Index j = 0; j < 3; ++j) {
      const double bound =
          3.0 * std::sqrt(std::max(e.eigenvalues[j], 0.0) / 200.0);
      const double offset = std::abs((mean - centroid).dot(e.eigenvectors.col(j)));
      inside = inside && offset <= bound;
    }
    ok += inside;
  }
  CHECK(ok >= 980);  // 3 sigma spans ~99.7% per direction
}

TEST_CASE("condensation matches eigenvalue variances on a large group") {
  const Dataset d = make_blobs(10000, 4, 1, 9, 0.0, 3.0);
  const ColumnStats stats = column_stats(d.values);
  const Vector centroid = stats.sums / 10000.0;
  const EigenSystemX e = eigendecompose(covariance_from_stats(stats));

  CondensationConfig cfg;
  cfg.group_size = 10000;
  cfg.seed = 11;
  const PerturbResult r = perturb_condensation(d, cfg);

  for (Index j = 0; j < 4; ++j) {
    const Vector coord =
        (r.data.values.rowwise() - centroid.transpose()) * e.eigenvectors.col(j);
    const double var = coord.squaredNorm() / 10000.0 -
                       std::pow(coord.mean(), 2);
    CHECK(var == doctest::Approx(e.eigenvalues[j]).epsilon(0.2));
  }
}

TEST_CASE("condensation permutes labels within each group") {
  const Dataset d = make_blobs(90, 3, 3, 17);
  CondensationConfig cfg;
  cfg.group_size = 9;
  cfg.seed = 23;
  cfg.with_provenance = true;
  const PerturbResult r = perturb_condensation(d, cfg);
  REQUIRE(r.data.rows() == 90);

  Index at = 0;
  for (const auto& members : r.groups) {
    std::multiset<std::string> original, synthetic;
    for (std::size_t i = 0; i < members.size(); ++i) {
      original.insert(d.labels[static_cast<std::size_t>(members[i])]);
      synthetic.insert(
          r.data.labels[static_cast<std::size_t>(at + static_cast<Index>(i))]);
    }
    CHECK(original == synthetic);
    at += static_cast<Index>(members.size());
  }
}

TEST_CASE("random rotation is one global isometry of the normalized data") {
  const Dataset d = make_blobs(120, 4, 3, 29);
  const Matrix normalized = zscore_normalize(d.values).first;

  RandomRotationConfig cfg;
  cfg.iterations = 1;
  cfg.seed = 31;
  const PerturbResult r = perturb_random_rotation(d, cfg);
  const NormalizationParams params = zscore_normalize(d.values).second;
  const Matrix pert_norm = apply_normalization(params, r.data.values);

  for (Index i = 0; i < 40; ++i) {
    for (Index j = i + 1; j < 40; ++j) {
      const double before = (normalized.row(i) - normalized.row(j)).norm();
      const double after = (pert_norm.row(i) - pert_norm.row(j)).norm();
      CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
    }
  }
  // rows stay in place
  REQUIRE(r.provenance.empty());
}

TEST_CASE("random rotation keeps the best-scoring candidate") {
  const Dataset d = make_blobs(150, 3, 3, 37);
  RandomRotationConfig cfg;
  cfg.iterations = 10;
  cfg.seed = 41;
  RandomRotationDiagnostics diag;
  perturb_random_rotation(d, cfg, &diag);
  REQUIRE(diag.candidate_scores.size() == 10);
  REQUIRE(diag.winner >= 0);
  for (int i = 0; i < 10; ++i) {
    CHECK(diag.candidate_scores[diag.winner] >= diag.candidate_scores[i]);
  }
}

TEST_CASE("raw-mode random rotation is an isometry of the raw values") {
  const Dataset d = make_blobs(80, 3, 2, 53);
  RandomRotationConfig cfg;
  cfg.iterations = 3;
  cfg.seed = 59;
  cfg.rotate_raw = true;
  const PerturbResult r = perturb_random_rotation(d, cfg);
  for (Index i = 0; i < 30; ++i) {
    for (Index j = i + 1; j < 30; ++j) {
      const double before = (d.values.row(i) - d.values.row(j)).norm();
      const double after =
          (r.data.values.row(i) - r.data.values.row(j)).norm();
      CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
    }
  }
}

TEST_CASE("random rotation is deterministic and label-preserving") {
  const Dataset d = make_blobs(75, 3, 3, 43);
  RandomRotationConfig cfg;
  cfg.seed = 47;
  const PerturbResult a = perturb_random_rotation(d, cfg);
  const PerturbResult b = perturb_random_rotation(d, cfg);
  CHECK(a.data.values == b.data.values);
  CHECK(a.data.labels == d.labels);

  CondensationConfig dc;
  dc.group_size = 5;
  dc.seed = 47;
  const PerturbResult ca = perturb_condensation(d, dc);
  const PerturbResult cb = perturb_condensation(d, dc);
  CHECK(ca.data.values == cb.data.values);
}

}  // TEST_SUITE
