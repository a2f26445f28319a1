#include "procal/report.hpp"

#include <cstdio>
#include <fstream>

#include "procal/errors.hpp"

namespace procal {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  return out;
}

std::string Table::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  };
  widen(header);
  for (const auto& row : rows) widen(row);

  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      out.append(width[i] - row[i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  return out;
}

Table attack_table(const std::vector<AttackReport>& reports) {
  Table t;
  t.header = {"method", "NImin", "NIavg", "ICAmin", "ICAavg", "IOmin", "IOavg"};
  for (const auto& r : reports) {
    t.rows.push_back({r.method, format_double(r.ni_min), format_double(r.ni_avg),
                      format_double(r.ica_min), format_double(r.ica_avg),
                      format_double(r.io_min), format_double(r.io_avg)});
  }
  return t;
}

Table utility_table(const UtilityComparison& comparison) {
  Table t;
  t.header = {"fold"};
  for (const auto& col : comparison.columns) t.header.push_back(col.method);

  std::size_t folds = 0;
  for (const auto& col : comparison.columns) {
    folds = std::max(folds, col.fold_accuracies.size());
  }
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::string> row{std::to_string(f + 1)};
    for (const auto& col : comparison.columns) {
      row.push_back(f < col.fold_accuracies.size()
                        ? format_double(col.fold_accuracies[f])
                        : "");
    }
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> overall{"overall"};
  for (const auto& col : comparison.columns) {
    overall.push_back(format_double(col.accuracy));
  }
  t.rows.push_back(std::move(overall));
  return t;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp);
    out << content;
    if (!out) throw DataError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw DataError("cannot move " + tmp + " into place");
  }
}

}  // namespace procal
