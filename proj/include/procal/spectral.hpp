#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/errors.hpp"
#include "procal/rng.hpp"
#include "procal/types.hpp"

namespace procal {

/// Spectral decomposition of a symmetric matrix. Eigenvalues are sorted
/// descending; each eigenvector column has its first nonzero entry made
/// positive so the decomposition is deterministic up to the solver.
template <typename Scalar>
struct EigenSystem {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

/// An orthonormal matrix obtained by permuting the columns of an
/// eigenvector basis, together with the permutation that produced it.
template <typename Scalar>
struct RotationMatrix {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> entries;
  std::vector<Index> source_shuffle;  // column j came from source_shuffle[j]
};

using EigenSystemX = EigenSystem<double>;
using RotationMatrixX = RotationMatrix<double>;

/// Population covariance from first- and second-order sums:
///   C[a][b] = product_sums[a][b]/s - (sums[a]/s)(sums[b]/s).
/// A group of size 1 has no variance and yields the zero matrix.
template <typename DerivedS, typename DerivedP>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic>
covariance_from_stats(const Eigen::MatrixBase<DerivedS>& sums,
                      const Eigen::MatrixBase<DerivedP>& product_sums,
                      Index group_size) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar s = static_cast<Scalar>(group_size);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean = sums / s;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c =
      product_sums / s - mean * mean.transpose();
  return c;
}

inline Matrix covariance_from_stats(const ColumnStats& stats) {
  return covariance_from_stats(stats.sums, stats.product_sums, stats.count);
}

/// Full spectral decomposition of a real symmetric matrix.
template <typename Derived>
EigenSystem<typename Derived::Scalar> eigendecompose(
    const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::SelfAdjointEigenSolver<Mat> solver(c);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("symmetric eigensolver failed on a " +
                             std::to_string(c.rows()) + "x" +
                             std::to_string(c.cols()) + " matrix");
  }

  const Index n = c.rows();
  EigenSystem<Scalar> e;
  e.eigenvalues.resize(n);
  e.eigenvectors.resize(n, n);
  // the solver returns ascending order; flip to descending
  for (Index j = 0; j < n; ++j) {
    e.eigenvalues[j] = solver.eigenvalues()[n - 1 - j];
    e.eigenvectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Scalar v = e.eigenvectors(i, j);
      if (std::abs(v) > Scalar(1e-12)) {
        if (v < Scalar(0)) e.eigenvectors.col(j) = -e.eigenvectors.col(j);
        break;
      }
    }
  }
  return e;
}

/// Applies a uniformly random column permutation to the eigenvector
/// basis. Permuting columns of an orthonormal matrix keeps it
/// orthonormal, so the result still rotates without distorting distances.
template <typename Scalar>
RotationMatrix<Scalar> shuffle_columns(const EigenSystem<Scalar>& e,
                                       std::uint64_t seed) {
  Rng rng(seed);
  RotationMatrix<Scalar> r;
  r.source_shuffle = rng.permutation(e.eigenvectors.cols());
  r.entries.resize(e.eigenvectors.rows(), e.eigenvectors.cols());
  for (Index j = 0; j < e.eigenvectors.cols(); ++j) {
    r.entries.col(j) =
        e.eigenvectors.col(r.source_shuffle[static_cast<std::size_t>(j)]);
  }
  return r;
}

/// Rotates every row of `group_rows`: each record x becomes R x. Row
/// order is preserved.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> apply_rotation(
    const RotationMatrix<Scalar>& r, const Eigen::MatrixBase<Derived>& group_rows) {
  if (group_rows.cols() != r.entries.cols()) {
    throw DimensionMismatch("rotation is " + std::to_string(r.entries.rows()) +
                            "x" + std::to_string(r.entries.cols()) +
                            ", records have arity " +
                            std::to_string(group_rows.cols()));
  }
  return group_rows * r.entries.transpose();
}

/// QR-based orthonormalization with the usual sign fix (columns flipped
/// so the R factor has a nonnegative diagonal).
Matrix orthonormalize(const Matrix& m);

/// Haar-ish random orthogonal matrix: orthonormalized Gaussian.
Matrix random_orthogonal(Index n, Rng& rng);

}  // namespace procal
