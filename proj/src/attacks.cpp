#include "procal/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "procal/errors.hpp"
#include "procal/rng.hpp"
#include "procal/spectral.hpp"

namespace procal {

MinAvg naive_inference(const Matrix& original, const Matrix& perturbed_aligned) {
  return min_avg(normalized_difference_std(original, perturbed_aligned));
}

KnownPairs sample_known_pairs(const Matrix& original_norm,
                              const Matrix& perturbed_norm_aligned,
                              double fraction, std::uint64_t seed) {
  const Index m = original_norm.rows();
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ConfigError("known fraction " + std::to_string(fraction) +
                      " outside (0, 1]");
  }
  Index count = static_cast<Index>(std::llround(fraction * static_cast<double>(m)));
  count = std::clamp<Index>(count, 1, m);

  Rng rng(derive_seed(seed, "known-pairs"));
  std::vector<Index> all = rng.permutation(m);
  all.resize(static_cast<std::size_t>(count));
  std::sort(all.begin(), all.end());

  KnownPairs kp;
  kp.fraction = fraction;
  kp.rows = std::move(all);
  kp.original.resize(count, original_norm.cols());
  kp.perturbed.resize(count, perturbed_norm_aligned.cols());
  for (Index i = 0; i < count; ++i) {
    kp.original.row(i) = original_norm.row(kp.rows[static_cast<std::size_t>(i)]);
    kp.perturbed.row(i) =
        perturbed_norm_aligned.row(kp.rows[static_cast<std::size_t>(i)]);
  }
  return kp;
}

KnownIoResult known_io_attack(const Matrix& original,
                              const Matrix& perturbed_aligned,
                              const KnownPairs& known) {
  if (known.rows.empty()) throw DataError("known pairs are empty");

  const Matrix orig_norm = zscore_normalize(original).first;
  const Matrix pert_norm = zscore_normalize(perturbed_aligned).first;

  // M minimizing sum ||M x - y||^2 over the known pairs: solve the
  // transposed least-squares problem X M^T = Y.
  const Matrix mt =
      known.original.completeOrthogonalDecomposition().solve(known.perturbed);
  const Matrix m = mt.transpose();

  // invert on every perturbed row; COD handles the singular case
  const Matrix m_pinv =
      m.completeOrthogonalDecomposition().pseudoInverse();
  KnownIoResult r;
  r.reconstructed = pert_norm * m_pinv.transpose();
  r.metric = min_avg(normalized_difference_std(orig_norm, r.reconstructed));
  return r;
}

Matrix whiten(const Matrix& observations, Index components) {
  const Index m = observations.rows();
  if (m < components) {
    throw DataError("whitening needs at least as many rows as components");
  }
  const Vector mean = observations.colwise().mean();
  const Matrix centered = observations.rowwise() - mean.transpose();
  const Matrix cov =
      centered.transpose() * centered / static_cast<double>(m);
  const EigenSystemX e = eigendecompose(cov);

  const double lead = std::max(e.eigenvalues[0], 0.0);
  Index keep = 0;
  while (keep < components && e.eigenvalues[keep] > 1e-12 * std::max(1.0, lead)) {
    ++keep;
  }
  Matrix projector(observations.cols(), keep);
  for (Index j = 0; j < keep; ++j) {
    projector.col(j) = e.eigenvectors.col(j) / std::sqrt(e.eigenvalues[j]);
  }
  return centered * projector;
}

FastIcaResult fast_ica(const Matrix& observations, Index components,
                       const FastIcaParams& params) {
  const Index m = observations.rows();
  if (components < 1 || components > observations.cols()) {
    throw ConfigError("component count " + std::to_string(components) +
                      " outside [1, " + std::to_string(observations.cols()) +
                      "]");
  }
  if (m < components) {
    throw DataError("fast_ica needs rows >= components");
  }

  const Matrix z = whiten(observations, components);  // m x c
  const Index c = z.cols();
  if (c == 0) {
    // constant data carries no recoverable signal
    FastIcaResult empty;
    empty.sources.resize(m, 0);
    empty.unmixing.resize(0, 0);
    empty.mixing.resize(0, observations.cols());
    return empty;
  }
  const double scale = 1.0 / static_cast<double>(m);

  Rng rng(derive_seed(params.seed, "ica-init"));
  Matrix w(c, c);  // rows are unmixing directions
  FastIcaResult r;
  r.converged.assign(static_cast<std::size_t>(c), false);

  for (Index p = 0; p < c; ++p) {
    Vector wp(c);
    for (Index j = 0; j < c; ++j) wp[j] = rng.normal();
    wp.normalize();

    for (int iter = 0; iter < params.max_iter; ++iter) {
      const Vector proj = z * wp;                        // m
      const Vector g = proj.array().tanh();              // contrast
      const double gp_mean = (1.0 - g.array().square()).mean();
      Vector next = (z.transpose() * g) * scale - gp_mean * wp;

      // deflation: stay orthogonal to the components already found
      for (Index q = 0; q < p; ++q) {
        next -= next.dot(w.row(q)) * w.row(q).transpose();
      }
      const double norm = next.norm();
      if (norm < 1e-12) {
        // degenerate direction; restart from fresh noise
        for (Index j = 0; j < c; ++j) next[j] = rng.normal();
        for (Index q = 0; q < p; ++q) {
          next -= next.dot(w.row(q)) * w.row(q).transpose();
        }
        next.normalize();
        wp = next;
        continue;
      }
      next /= norm;

      const double agreement = std::abs(next.dot(wp));
      wp = next;
      if (std::abs(1.0 - agreement) < params.tol) {
        r.converged[static_cast<std::size_t>(p)] = true;
        break;
      }
    }
    w.row(p) = wp.transpose();
  }

  r.unmixing = w;
  r.sources = z * w.transpose();  // m x c
  const Vector obs_mean = observations.colwise().mean();
  r.mixing = r.sources.completeOrthogonalDecomposition().solve(
      observations.rowwise() - obs_mean.transpose());
  r.components = c;
  return r;
}

IcaAttackResult ica_attack(const Matrix& original,
                           const Matrix& perturbed_aligned,
                           const FastIcaParams& params) {
  const Index m = original.rows();
  const Index n = original.cols();
  if (n < 2) throw DataError("ica_attack needs at least 2 attributes");

  FastIcaResult ica = fast_ica(perturbed_aligned, n, params);
  const Index c = ica.components;

  const Matrix orig_norm = zscore_normalize(original).first;
  const Matrix src_norm = zscore_normalize(ica.sources).first;

  // |correlation| between every attribute and every component; on
  // z-scored columns this is just the mean product
  Matrix corr = orig_norm.transpose() * src_norm / static_cast<double>(m);

  IcaAttackResult r;
  r.component_of_attribute.assign(static_cast<std::size_t>(n), -1);
  r.fully_converged =
      std::all_of(ica.converged.begin(), ica.converged.end(),
                  [](bool b) { return b; });

  Matrix strength = corr.cwiseAbs();
  for (Index pick = 0; pick < std::min(n, c); ++pick) {
    Index best_a = -1, best_j = -1;
    double best = -1.0;
    for (Index a = 0; a < n; ++a) {
      if (r.component_of_attribute[static_cast<std::size_t>(a)] >= 0) continue;
      for (Index j = 0; j < c; ++j) {
        if (strength(a, j) > best) {
          best = strength(a, j);
          best_a = a;
          best_j = j;
        }
      }
    }
    if (best_a < 0) break;
    r.component_of_attribute[static_cast<std::size_t>(best_a)] = best_j;
    strength.col(best_j).setConstant(-1.0);  // a component matches once
  }

  r.reconstructed = Matrix::Zero(m, n);  // unmatched attrs stay at the mean
  for (Index a = 0; a < n; ++a) {
    const Index j = r.component_of_attribute[static_cast<std::size_t>(a)];
    if (j < 0) continue;
    const double sign = corr(a, j) < 0 ? -1.0 : 1.0;
    r.reconstructed.col(a) = sign * src_norm.col(j);
  }
  r.metric = min_avg(normalized_difference_std(orig_norm, r.reconstructed));
  return r;
}

AttackReport evaluate_attacks(const std::string& method_name,
                              const Dataset& original,
                              const PerturbResult& perturbed,
                              double known_fraction, std::uint64_t seed) {
  if (perturbed.provenance.size() !=
      static_cast<std::size_t>(original.rows())) {
    throw ProvenanceMissing();
  }
  const Matrix aligned =
      align_to_original(perturbed.data.values, perturbed.provenance);

  AttackReport report;
  report.method = method_name;

  const MinAvg ni = naive_inference(original.values, aligned);
  report.ni_min = ni.min;
  report.ni_avg = ni.avg;

  const Matrix orig_norm = zscore_normalize(original.values).first;
  const Matrix pert_norm = zscore_normalize(aligned).first;
  const KnownPairs known =
      sample_known_pairs(orig_norm, pert_norm, known_fraction, seed);
  const KnownIoResult io = known_io_attack(original.values, aligned, known);
  report.io_min = io.metric.min;
  report.io_avg = io.metric.avg;

  FastIcaParams ica_params;
  ica_params.seed = derive_seed(seed, "ica");
  const IcaAttackResult ica = ica_attack(original.values, aligned, ica_params);
  report.ica_min = ica.metric.min;
  report.ica_avg = ica.metric.avg;
  report.ica_fully_converged = ica.fully_converged;
  return report;
}

}  // namespace procal
