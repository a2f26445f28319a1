#include "procal/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "procal/errors.hpp"
#include "procal/report.hpp"

namespace procal {

void RunManifest::set(const std::string& key, const std::string& value) {
  entries[key] = value;
}

void RunManifest::set(const std::string& key, long long value) {
  entries[key] = std::to_string(value);
}

void RunManifest::set(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  entries[key] = buf;
}

void RunManifest::set_argv(const std::vector<std::string>& argv) {
  set("argc", static_cast<long long>(argv.size()));
  for (std::size_t i = 0; i < argv.size(); ++i) {
    entries["argv." + std::to_string(i)] = argv[i];
  }
}

std::vector<std::string> RunManifest::argv() const {
  std::vector<std::string> out;
  const auto it = entries.find("argc");
  if (it == entries.end()) return out;
  const int argc = std::stoi(it->second);
  for (int i = 0; i < argc; ++i) {
    const auto arg = entries.find("argv." + std::to_string(i));
    if (arg == entries.end()) {
      throw DataError("manifest is missing argv." + std::to_string(i));
    }
    out.push_back(arg->second);
  }
  return out;
}

std::string RunManifest::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

RunManifest RunManifest::parse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  RunManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("manifest line without '=': " + line);
    }
    m.entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

void RunManifest::write(const std::string& path) const {
  write_file_atomic(path, serialize());
}

}  // namespace procal
