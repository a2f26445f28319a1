#include "procal/metrics.hpp"

#include <cmath>

#include "procal/dataset.hpp"
#include "procal/errors.hpp"

namespace procal {

Vector normalized_difference_std(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("normalized_difference_std inputs " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  const Matrix za = zscore_normalize(a).first;
  const Matrix zb = zscore_normalize(b).first;
  const double m = static_cast<double>(a.rows());
  Vector out(a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    const Vector diff = za.col(j) - zb.col(j);
    const double mean = diff.mean();
    out[j] = std::sqrt((diff.array() - mean).square().sum() / m);
  }
  return out;
}

MinAvg min_avg(const Vector& per_attribute) {
  MinAvg r;
  r.min = per_attribute.minCoeff();
  r.avg = per_attribute.mean();
  return r;
}

}  // namespace procal
