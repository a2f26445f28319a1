#pragma once

#include <map>
#include <string>
#include <vector>

namespace procal {

/// Flat key-value record of one CLI run: command, resolved configuration,
/// seed, paths, version, timings. A manifest is enough to reproduce the
/// run bit-for-bit (`procal rerun <manifest>`).
struct RunManifest {
  std::map<std::string, std::string> entries;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, double value);

  /// Stores the argument vector both joined (for reading) and as indexed
  /// entries (for exact reruns).
  void set_argv(const std::vector<std::string>& argv);
  std::vector<std::string> argv() const;

  std::string serialize() const;
  static RunManifest parse(const std::string& path);

  void write(const std::string& path) const;
};

}  // namespace procal
