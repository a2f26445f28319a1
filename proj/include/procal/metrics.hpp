#pragma once

#include "procal/types.hpp"

namespace procal {

struct MinAvg {
  double min = 0.0;
  double avg = 0.0;
};

/// Per-attribute standard deviation of (z(a) - z(b)) over rows. Both
/// inputs are z-scored independently first, so the result is scale-free;
/// rows must be aligned. This is the common scale for every resilience
/// metric in the attack reports.
Vector normalized_difference_std(const Matrix& a, const Matrix& b);

MinAvg min_avg(const Vector& per_attribute);

}  // namespace procal
