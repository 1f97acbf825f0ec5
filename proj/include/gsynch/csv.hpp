#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "error.hpp"

namespace gsynch {

/// Shortest round-trip representation; "nan"/"inf" spelled out.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::int64_t x) { return std::to_string(x); }
inline std::string format_number(int x) { return std::to_string(x); }

/// RFC 4180 field quoting.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) fail(ErrorKind::numerical_inconsistency, "table row has the wrong width");
    rows.push_back(std::move(row));
  }

  std::string to_csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
      }
      os << "\r\n";
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

/// Write to a sibling temp file, then rename over the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::config_error, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::config_error, "failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gsynch
