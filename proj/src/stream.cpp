#include "procal/stream.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <thread>

#include "procal/errors.hpp"
#include "procal/perturb.hpp"
#include "procal/rng.hpp"
#include "procal/synthetic.hpp"

namespace procal {

DatasetSource::DatasetSource(Dataset d, long delay_micros)
    : data_(std::move(d)), delay_micros_(delay_micros) {}

std::optional<Record> DatasetSource::next() {
  if (cursor_ >= data_.rows()) return std::nullopt;
  if (delay_micros_ > 0) {
    std::this_thread::sleep_for(std::chrono::microseconds(delay_micros_));
  }
  return data_.record(cursor_++);
}

CsvReplaySource::CsvReplaySource(const std::string& path, bool has_header,
                                 std::optional<int> class_column,
                                 double rows_per_second) {
  Dataset d = load_csv(path, has_header, class_column);
  long delay_micros = 0;
  if (rows_per_second > 0) {
    delay_micros = static_cast<long>(1e6 / rows_per_second);
  }
  inner_ = std::make_unique<DatasetSource>(std::move(d), delay_micros);
}

std::optional<Record> CsvReplaySource::next() { return inner_->next(); }
std::vector<std::string> CsvReplaySource::schema() const {
  return inner_->schema();
}
std::string CsvReplaySource::label_name() const { return inner_->label_name(); }
bool CsvReplaySource::labeled() const { return inner_->labeled(); }

LineSource::LineSource(std::istream& in, std::optional<int> class_column)
    : in_(in), class_column_(class_column) {}

std::optional<Record> LineSource::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++row_;
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    for (auto& f : fields) {
      const std::size_t b = f.find_first_not_of(" \t\r");
      if (b == std::string::npos) {
        f.clear();
        continue;
      }
      const std::size_t e = f.find_last_not_of(" \t\r");
      f = f.substr(b, e - b + 1);
    }

    if (arity_ == 0) arity_ = fields.size();
    if (fields.size() != arity_) throw MalformedRow(row_, arity_, fields.size());

    long label_col = -1;
    if (class_column_) {
      long idx = *class_column_;
      if (idx < 0) idx += static_cast<long>(arity_);
      if (idx < 0 || idx >= static_cast<long>(arity_)) {
        throw ConfigError("class column " + std::to_string(*class_column_) +
                          " outside a " + std::to_string(arity_) +
                          "-column stream");
      }
      label_col = idx;
    }

    Record r;
    r.values.resize(static_cast<Index>(arity_) - (label_col >= 0 ? 1 : 0));
    Index v = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (static_cast<long>(j) == label_col) {
        r.label = fields[j];
        continue;
      }
      double x = 0.0;
      const char* begin = fields[j].data();
      auto [ptr, ec] = std::from_chars(begin, begin + fields[j].size(), x);
      if (ec != std::errc{} || ptr != begin + fields[j].size() ||
          !std::isfinite(x)) {
        throw NonNumericValue(row_, static_cast<long>(j), fields[j]);
      }
      r.values[v++] = x;
    }
    return r;
  }
  return std::nullopt;
}

void validate(const StreamConfig& cfg) {
  if (cfg.buffer_size < 1) {
    throw InvalidStreamConfig("buffer size " + std::to_string(cfg.buffer_size) +
                              " (must be >= 1)");
  }
  if (cfg.release_threshold < 1) {
    throw InvalidStreamConfig("release threshold " +
                              std::to_string(cfg.release_threshold) +
                              " (must be >= 1)");
  }
  if (cfg.grouping.mode == GroupingMode::by_cluster_count &&
      cfg.buffer_size < 2 * cfg.grouping.k) {
    throw InvalidStreamConfig(
        "buffer size " + std::to_string(cfg.buffer_size) + " < 2*k = " +
        std::to_string(2 * cfg.grouping.k) +
        "; clusters could end up with one or zero records");
  }
}

StreamSession::StreamSession(RecordSource& source, const StreamConfig& cfg)
    : source_(source), cfg_(cfg) {
  validate(cfg_);
  schema_ = source_.schema();
  label_name_ = source_.label_name();
  labeled_ = source_.labeled();
  if (labeled_ && label_name_.empty()) label_name_ = "class";
}

std::optional<StreamSession::Chunk> StreamSession::pull_chunk() {
  std::vector<Record> rows;
  rows.reserve(static_cast<std::size_t>(cfg_.buffer_size));
  try {
    while (static_cast<Index>(rows.size()) < cfg_.buffer_size) {
      auto r = source_.next();
      if (!r) {
        exhausted_ = true;
        break;
      }
      rows.push_back(std::move(*r));
    }
  } catch (const SourceFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw SourceFailure(chunk_index_ + 1, e.what());
  }
  if (rows.empty()) return std::nullopt;

  Chunk c;
  const Index n = rows.front().values.size();
  c.values.resize(static_cast<Index>(rows.size()), n);
  if (labeled_) c.labels.reserve(rows.size());
  c.source_rows.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != n) {
      throw ArityMismatch(n, rows[i].values.size());
    }
    c.values.row(static_cast<Index>(i)) = rows[i].values.transpose();
    if (labeled_) c.labels.push_back(std::move(rows[i].label));
    c.source_rows.push_back(rows_consumed_ + static_cast<Index>(i));
  }
  rows_consumed_ += static_cast<Index>(rows.size());
  return c;
}

std::optional<ReleaseBlock> StreamSession::next_release() {
  std::vector<Chunk> held;
  Index held_rows = 0;

  while (static_cast<Index>(held.size()) < cfg_.release_threshold &&
         !exhausted_) {
    auto chunk = pull_chunk();
    if (!chunk) break;
    ++chunk_index_;

    if (schema_.empty()) {
      for (Index j = 0; j < chunk->values.cols(); ++j) {
        schema_.push_back("a" + std::to_string(j));
      }
    }

    Dataset buffer;
    buffer.values = std::move(chunk->values);
    buffer.labels = std::move(chunk->labels);
    buffer.schema = schema_;
    buffer.label_name = label_name_;

    PerturbConfig pcfg;
    pcfg.grouping = cfg_.grouping;
    if (pcfg.grouping.mode == GroupingMode::by_cluster_count &&
        pcfg.grouping.k > buffer.rows()) {
      pcfg.grouping.k = buffer.rows();  // short final buffer
    }
    pcfg.seed = derive_seed(cfg_.seed, "chunk",
                            static_cast<std::uint64_t>(chunk_index_));
    pcfg.shuffle_rows = false;  // the release block shuffles as a whole
    pcfg.with_provenance = true;
    pcfg.carried_rotation = carried_rotation_;
    PerturbResult res = perturb_static(buffer, pcfg);
    if (res.last_rotation.size() != 0) carried_rotation_ = res.last_rotation;

    Chunk out;
    out.values = std::move(res.data.values);
    out.labels = std::move(res.data.labels);
    out.source_rows.resize(res.provenance.size());
    for (std::size_t j = 0; j < res.provenance.size(); ++j) {
      out.source_rows[j] =
          chunk->source_rows[static_cast<std::size_t>(res.provenance[j])];
    }
    if (cfg_.test_mode) {
      std::vector<std::vector<Index>> groups;
      for (const auto& g : res.groups) {
        std::vector<Index> global;
        global.reserve(g.size());
        for (Index r : g) {
          global.push_back(chunk->source_rows[static_cast<std::size_t>(r)]);
        }
        groups.push_back(std::move(global));
      }
      chunk_groups_.push_back(std::move(groups));
    }

    held_rows += out.values.rows();
    held.push_back(std::move(out));
    peak_buffered_ = std::max(peak_buffered_, held_rows);
  }

  if (held.empty()) return std::nullopt;

  ReleaseBlock block;
  block.final_flush =
      static_cast<Index>(held.size()) < cfg_.release_threshold;
  block.release_index = ++release_count_;
  block.data.schema = schema_;
  block.data.label_name = label_name_;
  block.data.values.resize(held_rows, held.front().values.cols());
  if (labeled_) block.data.labels.resize(static_cast<std::size_t>(held_rows));
  std::vector<Index> sources(static_cast<std::size_t>(held_rows));

  Index at = 0;
  for (auto& c : held) {
    for (Index i = 0; i < c.values.rows(); ++i, ++at) {
      block.data.values.row(at) = c.values.row(i);
      if (labeled_) {
        block.data.labels[static_cast<std::size_t>(at)] =
            std::move(c.labels[static_cast<std::size_t>(i)]);
      }
      sources[static_cast<std::size_t>(at)] =
          c.source_rows[static_cast<std::size_t>(i)];
    }
  }

  // shuffle the release as one block
  Rng rng(derive_seed(cfg_.seed, "release",
                      static_cast<std::uint64_t>(release_count_)));
  std::vector<Index> order = rng.permutation(held_rows);
  Matrix shuffled(held_rows, block.data.values.cols());
  std::vector<std::string> shuffled_labels;
  if (labeled_) shuffled_labels.resize(static_cast<std::size_t>(held_rows));
  std::vector<Index> shuffled_sources(static_cast<std::size_t>(held_rows));
  for (Index j = 0; j < held_rows; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    shuffled.row(j) = block.data.values.row(src);
    if (labeled_) {
      shuffled_labels[static_cast<std::size_t>(j)] =
          std::move(block.data.labels[static_cast<std::size_t>(src)]);
    }
    shuffled_sources[static_cast<std::size_t>(j)] =
        sources[static_cast<std::size_t>(src)];
  }
  block.data.values = std::move(shuffled);
  block.data.labels = std::move(shuffled_labels);
  if (cfg_.test_mode) block.source_rows = std::move(shuffled_sources);

  rows_released_ += held_rows;
  return block;
}

ThroughputReport throughput_probe(const StreamConfig& cfg, Index m, Index n,
                                  std::uint64_t data_seed) {
  Dataset d = make_gaussian(m, n, data_seed);
  DatasetSource source(std::move(d));
  StreamSession session(source, cfg);

  const auto start = std::chrono::steady_clock::now();
  while (session.next_release()) {
  }
  const auto stop = std::chrono::steady_clock::now();

  ThroughputReport r;
  r.rows = session.rows_released();
  r.seconds = std::chrono::duration<double>(stop - start).count();
  r.rows_per_second = r.seconds > 0 ? static_cast<double>(r.rows) / r.seconds
                                    : 0.0;
  return r;
}

}  // namespace procal
