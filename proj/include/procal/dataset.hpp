#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procal/types.hpp"

namespace procal {

/// A single row: numeric attribute values plus an optional class token.
struct Record {
  Vector values;
  std::string label;  // empty when the dataset is unlabeled
};

/// An ordered table of numeric records. The optional class column is kept
/// out of `values` and never enters a numeric transform; it rides along in
/// `labels`, one token per row.
struct Dataset {
  Matrix values;                    // rows = records, cols = attributes
  std::vector<std::string> schema;  // attribute names, size == cols
  std::vector<std::string> labels;  // size == rows when labeled, else empty
  std::string label_name;
  std::optional<Index> label_column;  // position of the class column in the
                                      // file layout, for round-tripping

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }
  Record record(Index i) const {
    return {values.row(i).transpose(),
            has_labels() ? labels[static_cast<std::size_t>(i)] : ""};
  }
};

/// Per-attribute location/scale used by z-score normalization. A zero std
/// flags a constant column; such columns normalize to all zeros.
struct NormalizationParams {
  Vector means;
  Vector stds;  // population std; exactly 0 for constant columns
  bool zero_variance(Index j) const { return stds[j] == 0.0; }
};

/// First- and second-order column sums, sufficient for covariance.
struct ColumnStats {
  Vector sums;          // sum of each attribute
  Matrix product_sums;  // sum of products for each attribute pair
  Index count = 0;
};

/// Loads a comma-delimited text file. Row order is preserved. Any
/// non-numeric or empty cell in a non-class column is an error; rows of
/// uneven arity are an error. `class_column` indexes the file layout and
/// may be negative to count from the end (-1 = last).
Dataset load_csv(const std::string& path, bool has_header,
                 std::optional<int> class_column = std::nullopt);

/// Writes a dataset back to CSV with 17 significant digits, which
/// round-trips IEEE doubles exactly. The class column, if any, is emitted
/// at its recorded position.
void emit_csv(const Dataset& d, const std::string& path);

std::pair<Dataset, NormalizationParams> zscore_normalize(const Dataset& d);

/// Matrix-level z-score; shares the convention above.
std::pair<Matrix, NormalizationParams> zscore_normalize(const Matrix& values);

/// Applies stored parameters; bit-identical to the normalization that
/// produced them.
Matrix apply_normalization(const NormalizationParams& p, const Matrix& values);

/// Inverse of apply_normalization (constant columns map back to the mean).
Matrix invert_normalization(const NormalizationParams& p, const Matrix& values);

ColumnStats column_stats(const Matrix& values);
ColumnStats column_stats(const Dataset& d);

}  // namespace procal
