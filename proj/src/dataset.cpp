#include "procal/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "procal/errors.hpp"

namespace procal {

namespace {

void split_fields(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : out) {
    const std::size_t b = f.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      f.clear();
      continue;
    }
    const std::size_t e = f.find_last_not_of(" \t\r");
    f = f.substr(b, e - b + 1);
  }
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

Index resolve_label_column(int requested, std::size_t arity) {
  const long n = static_cast<long>(arity);
  long idx = requested;
  if (idx < 0) idx += n;
  if (idx < 0 || idx >= n) {
    throw ConfigError("class column " + std::to_string(requested) +
                      " outside a " + std::to_string(n) + "-column file");
  }
  return static_cast<Index>(idx);
}

}  // namespace

Dataset load_csv(const std::string& path, bool has_header,
                 std::optional<int> class_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  Dataset d;
  std::string line;
  std::vector<std::string> fields;
  std::vector<std::string> header;
  std::vector<double> flat;
  std::size_t arity = 0;
  Index label_col = -1;
  long row = 0;      // 1-based line number in the file
  long records = 0;

  bool expect_header = has_header;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    split_fields(line, fields);

    if (arity == 0) {
      arity = fields.size();
      if (class_column) label_col = resolve_label_column(*class_column, arity);
      if (expect_header) {
        header = fields;
        expect_header = false;
        continue;
      }
      header.resize(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        header[j] = (static_cast<Index>(j) == label_col)
                        ? "class"
                        : "a" + std::to_string(j);
      }
    }

    if (fields.size() != arity) throw MalformedRow(row, arity, fields.size());

    for (std::size_t j = 0; j < arity; ++j) {
      if (static_cast<Index>(j) == label_col) {
        d.labels.push_back(fields[j]);
        continue;
      }
      double v = 0.0;
      if (!parse_double(fields[j], v)) {
        throw NonNumericValue(row, static_cast<long>(j), fields[j]);
      }
      flat.push_back(v);
    }
    ++records;
  }

  if (records == 0) throw EmptyDataset();

  const Index n = static_cast<Index>(arity) - (label_col >= 0 ? 1 : 0);
  d.values.resize(records, n);
  for (long i = 0; i < records; ++i) {
    for (Index j = 0; j < n; ++j) {
      d.values(i, j) = flat[static_cast<std::size_t>(i * n + j)];
    }
  }

  d.schema.reserve(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < arity; ++j) {
    if (static_cast<Index>(j) == label_col) {
      d.label_name = header[j];
    } else {
      d.schema.push_back(header[j]);
    }
  }
  if (label_col >= 0) d.label_column = label_col;
  return d;
}

void emit_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);

  const Index n = d.cols();
  const Index label_col =
      d.label_column.value_or(d.has_labels() ? n : Index{-1});

  std::string line;
  char buf[64];
  auto append_header = [&](Index file_col, Index attr) {
    if (file_col > 0) line += ',';
    line += (file_col == label_col)
                ? d.label_name
                : d.schema[static_cast<std::size_t>(attr)];
  };

  const Index width = n + (d.has_labels() ? 1 : 0);
  line.clear();
  Index attr = 0;
  for (Index c = 0; c < width; ++c) {
    append_header(c, attr);
    if (c != label_col) ++attr;
  }
  out << line << '\n';

  for (Index i = 0; i < d.rows(); ++i) {
    line.clear();
    attr = 0;
    for (Index c = 0; c < width; ++c) {
      if (c > 0) line += ',';
      if (c == label_col) {
        line += d.labels[static_cast<std::size_t>(i)];
      } else {
        std::snprintf(buf, sizeof(buf), "%.17g", d.values(i, attr));
        line += buf;
        ++attr;
      }
    }
    out << line << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

std::pair<Matrix, NormalizationParams> zscore_normalize(const Matrix& values) {
  if (values.rows() == 0) throw EmptyDataset();
  const double m = static_cast<double>(values.rows());
  NormalizationParams p;
  p.means = values.colwise().mean();
  p.stds.resize(values.cols());
  for (Index j = 0; j < values.cols(); ++j) {
    const double var =
        (values.col(j).array() - p.means[j]).square().sum() / m;
    p.stds[j] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return {apply_normalization(p, values), p};
}

std::pair<Dataset, NormalizationParams> zscore_normalize(const Dataset& d) {
  auto [normalized, params] = zscore_normalize(d.values);
  Dataset out = d;
  out.values = std::move(normalized);
  return {std::move(out), std::move(params)};
}

Matrix apply_normalization(const NormalizationParams& p, const Matrix& values) {
  if (values.cols() != p.means.size()) {
    throw DimensionMismatch("normalization params cover " +
                            std::to_string(p.means.size()) + " attributes, data has " +
                            std::to_string(values.cols()));
  }
  Matrix out(values.rows(), values.cols());
  for (Index j = 0; j < values.cols(); ++j) {
    if (p.stds[j] == 0.0) {
      out.col(j).setZero();
    } else {
      out.col(j) = (values.col(j).array() - p.means[j]) / p.stds[j];
    }
  }
  return out;
}

Matrix invert_normalization(const NormalizationParams& p, const Matrix& values) {
  if (values.cols() != p.means.size()) {
    throw DimensionMismatch("normalization params cover " +
                            std::to_string(p.means.size()) + " attributes, data has " +
                            std::to_string(values.cols()));
  }
  Matrix out(values.rows(), values.cols());
  for (Index j = 0; j < values.cols(); ++j) {
    out.col(j) = values.col(j).array() * p.stds[j] + p.means[j];
  }
  return out;
}

ColumnStats column_stats(const Matrix& values) {
  if (values.rows() == 0) throw EmptyDataset();
  ColumnStats s;
  s.sums = values.colwise().sum();
  s.product_sums = values.transpose() * values;
  s.count = values.rows();
  return s;
}

ColumnStats column_stats(const Dataset& d) { return column_stats(d.values); }

}  // namespace procal
