#include "procal/synthetic.hpp"

#include <cmath>
#include <string>

#include "procal/rng.hpp"

namespace procal {

Dataset make_blobs(Index m, Index n, int classes, std::uint64_t seed,
                   double center_scale, double spread) {
  Rng rng(derive_seed(seed, "blobs"));
  Matrix centers(classes, n);
  for (int c = 0; c < classes; ++c) {
    Vector dir(n);
    for (Index j = 0; j < n; ++j) dir[j] = rng.normal();
    dir.normalize();
    // radii staggered so centers never collapse onto each other
    centers.row(c) =
        dir.transpose() * (center_scale * (1.0 + 0.25 * static_cast<double>(c)));
  }

  Dataset d;
  d.values.resize(m, n);
  d.labels.resize(static_cast<std::size_t>(m));
  d.schema.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) d.schema.push_back("a" + std::to_string(j));
  d.label_name = "class";
  d.label_column = n;

  for (Index i = 0; i < m; ++i) {
    const int c = static_cast<int>(i % classes);
    for (Index j = 0; j < n; ++j) {
      d.values(i, j) = centers(c, j) + spread * rng.normal();
    }
    d.labels[static_cast<std::size_t>(i)] = "c" + std::to_string(c);
  }
  return d;
}

Dataset make_gaussian(Index m, Index n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "gaussian"));
  Dataset d;
  d.values.resize(m, n);
  d.schema.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) d.schema.push_back("a" + std::to_string(j));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) d.values(i, j) = rng.normal();
  }
  return d;
}

Matrix make_uniform_sources(Index m, Index sources, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "uniform-sources"));
  const double half_width = std::sqrt(3.0);
  Matrix s(m, sources);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < sources; ++j) {
      s(i, j) = rng.uniform(-half_width, half_width);
    }
  }
  return s;
}

}  // namespace procal
