#pragma once

#include <stdexcept>
#include <string>

namespace procal {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or configuration. Mapped to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data. Mapped to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure failed. Mapped to CLI exit code 4.
class NumericError : public Error {
 public:
  using Error::Error;
};

class MalformedRow : public DataError {
 public:
  MalformedRow(long row, std::size_t expected, std::size_t got)
      : DataError("MalformedRow: row " + std::to_string(row) + " has " +
                  std::to_string(got) + " fields, expected " +
                  std::to_string(expected)) {}
};

class NonNumericValue : public DataError {
 public:
  NonNumericValue(long row, long column, const std::string& text)
      : DataError("NonNumericValue: row " + std::to_string(row) + ", column " +
                  std::to_string(column) + ": \"" + text + "\"") {}
};

class EmptyDataset : public DataError {
 public:
  EmptyDataset() : DataError("EmptyDataset: no records") {}
};

class ArityMismatch : public DataError {
 public:
  ArityMismatch(long a, long b)
      : DataError("ArityMismatch: record lengths " + std::to_string(a) +
                  " vs " + std::to_string(b)) {}
};

class DimensionMismatch : public DataError {
 public:
  explicit DimensionMismatch(const std::string& what)
      : DataError("DimensionMismatch: " + what) {}
};

class ProvenanceMissing : public DataError {
 public:
  ProvenanceMissing()
      : DataError("ProvenanceMissing: perturbed data carries no row map") {}
};

class NoLabels : public DataError {
 public:
  NoLabels() : DataError("NoLabels: dataset has no class column") {}
};

class TooFewRecords : public DataError {
 public:
  TooFewRecords(long records, long folds)
      : DataError("TooFewRecords: " + std::to_string(records) +
                  " records cannot fill " + std::to_string(folds) + " folds") {}
};

class SourceFailure : public DataError {
 public:
  SourceFailure(long chunk, const std::string& what)
      : DataError("SourceFailure: chunk " + std::to_string(chunk) + ": " +
                  what) {}
};

class InvalidGroupSize : public ConfigError {
 public:
  explicit InvalidGroupSize(long kprime)
      : ConfigError("InvalidGroupSize: group size " + std::to_string(kprime) +
                    " (must be >= 2)") {}
};

class InvalidClusterCount : public ConfigError {
 public:
  InvalidClusterCount(long k, long records)
      : ConfigError("InvalidClusterCount: k = " + std::to_string(k) +
                    " outside [1, " + std::to_string(records) + "]") {}
};

class InvalidStreamConfig : public ConfigError {
 public:
  explicit InvalidStreamConfig(const std::string& what)
      : ConfigError("InvalidStreamConfig: " + what) {}
};

class ConvergenceFailure : public NumericError {
 public:
  explicit ConvergenceFailure(const std::string& what)
      : NumericError("ConvergenceFailure: " + what) {}
};

}  // namespace procal
