#pragma once

#include <cstdint>

#include "procal/dataset.hpp"
#include "procal/types.hpp"

namespace procal {

/// Labeled Gaussian blobs: `classes` well-separated clusters of roughly
/// equal size. Centers are drawn at `center_scale` from the origin and
/// points scatter around them with the given spread.
Dataset make_blobs(Index m, Index n, int classes, std::uint64_t seed,
                   double center_scale = 25.0, double spread = 1.0);

/// Unlabeled standard-normal data, mean zero.
Dataset make_gaussian(Index m, Index n, std::uint64_t seed);

/// Independent uniform sources on [-sqrt(3), sqrt(3)] (unit variance),
/// one column per source.
Matrix make_uniform_sources(Index m, Index sources, std::uint64_t seed);

}  // namespace procal
