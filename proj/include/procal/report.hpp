#pragma once

#include <string>
#include <vector>

#include "procal/attacks.hpp"
#include "procal/utility.hpp"

namespace procal {

/// Rectangular table with a header row; renders as CSV or as an aligned
/// plain-text grid.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

Table attack_table(const std::vector<AttackReport>& reports);
Table utility_table(const UtilityComparison& comparison);

std::string format_double(double v);

/// Writes via a temp file and rename so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace procal
