#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "procal/dataset.hpp"
#include "procal/grouping.hpp"
#include "procal/types.hpp"

namespace procal {

/// Pull-based record supplier. next() may block (that is the
/// backpressure contract: the session never buffers ahead of one chunk).
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<Record> next() = 0;
  virtual std::vector<std::string> schema() const { return {}; }
  virtual std::string label_name() const { return {}; }
  virtual bool labeled() const { return false; }
};

/// Replays an in-memory dataset row by row. `delay_micros` throttles the
/// source, which the latency tests use to emulate a slow producer.
class DatasetSource : public RecordSource {
 public:
  explicit DatasetSource(Dataset d, long delay_micros = 0);
  std::optional<Record> next() override;
  std::vector<std::string> schema() const override { return data_.schema; }
  std::string label_name() const override { return data_.label_name; }
  bool labeled() const override { return data_.has_labels(); }
  Index emitted() const { return cursor_; }

 private:
  Dataset data_;
  Index cursor_ = 0;
  long delay_micros_;
};

/// Replays a CSV file as a stream, optionally paced at a target rate in
/// rows per second (0 = as fast as possible).
class CsvReplaySource : public RecordSource {
 public:
  CsvReplaySource(const std::string& path, bool has_header,
                  std::optional<int> class_column, double rows_per_second = 0);
  std::optional<Record> next() override;
  std::vector<std::string> schema() const override;
  std::string label_name() const override;
  bool labeled() const override;

 private:
  std::unique_ptr<DatasetSource> inner_;
};

/// Line-delimited comma-separated records from a stream (standard input
/// in the CLI). No header; arity is fixed by the first record.
class LineSource : public RecordSource {
 public:
  explicit LineSource(std::istream& in,
                      std::optional<int> class_column = std::nullopt);
  std::optional<Record> next() override;
  bool labeled() const override { return class_column_.has_value(); }

 private:
  std::istream& in_;
  std::optional<int> class_column_;
  long row_ = 0;
  std::size_t arity_ = 0;
};

struct StreamConfig {
  Index buffer_size = 0;        // records per chunk (l)
  Index release_threshold = 0;  // chunks per release (t)
  GroupingConfig grouping;
  std::uint64_t seed = 0;
  bool test_mode = false;  // keep per-row arrival indices and group debug
};

struct ReleaseBlock {
  Dataset data;
  Index release_index = 0;  // 1-based count of releases
  bool final_flush = false;  // emitted with fewer than t chunks at stream end
  std::vector<Index> source_rows;  // test_mode: arrival index per output row
};

/// Rejects configurations the session would refuse: non-positive sizes,
/// or a buffer too small to give every cluster at least two records.
void validate(const StreamConfig& cfg);

/// Buffered stream perturbation: fill a buffer of l records, perturb it
/// as one static dataset (grouping never crosses chunks), hold the
/// result, and release a merged block shuffled across all t chunks once
/// the threshold is reached. A partial tail at stream end is flushed as
/// a final, smaller block rather than dropped.
class StreamSession {
 public:
  StreamSession(RecordSource& source, const StreamConfig& cfg);

  /// Next merged block, or nullopt once the source is exhausted and
  /// everything has been flushed.
  std::optional<ReleaseBlock> next_release();

  Index rows_consumed() const { return rows_consumed_; }
  Index rows_released() const { return rows_released_; }
  Index peak_buffered_rows() const { return peak_buffered_; }

  /// test_mode only: for each chunk, the groups formed inside it, as
  /// global arrival indices.
  const std::vector<std::vector<std::vector<Index>>>& chunk_groups() const {
    return chunk_groups_;
  }

 private:
  struct Chunk {
    Matrix values;
    std::vector<std::string> labels;
    std::vector<Index> source_rows;
  };

  std::optional<Chunk> pull_chunk();

  RecordSource& source_;
  StreamConfig cfg_;
  std::vector<std::string> schema_;
  std::string label_name_;
  bool labeled_ = false;
  bool exhausted_ = false;
  Matrix carried_rotation_;
  Index chunk_index_ = 0;
  Index release_count_ = 0;
  Index rows_consumed_ = 0;
  Index rows_released_ = 0;
  Index peak_buffered_ = 0;
  std::vector<std::vector<std::vector<Index>>> chunk_groups_;
};

struct ThroughputReport {
  Index rows = 0;
  double seconds = 0.0;
  double rows_per_second = 0.0;
};

/// Steady-state throughput of the stream path on synthetic data, for
/// scaling checks.
ThroughputReport throughput_probe(const StreamConfig& cfg, Index m, Index n,
                                  std::uint64_t data_seed = 1);

}  // namespace procal
