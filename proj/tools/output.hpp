#pragma once

// Tabular and JSON report writers shared by the mgwt subcommands.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgwt/errors.hpp"
#include "mgwt/version.hpp"

namespace mgwt::cli {

/// Decimal, 9 significant digits, '.' radix, independent of the C locale.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// A header row plus data rows of preformatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

inline Metadata base_metadata(const std::string& command, std::uint64_t seed) {
  return {{"tool", "mgwt"}, {"version", kVersion}, {"command", command}, {"seed", std::to_string(seed)}};
}

inline void write_csv(std::ostream& os, const Metadata& meta, const Table& t) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

inline nlohmann::ordered_json table_json(const Metadata& meta, const Table& t) {
  nlohmann::ordered_json j;
  auto& m = j["metadata"];
  for (const auto& [k, v] : meta) m[k] = v;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j;
}

/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
inline void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw OutputError("cannot open output file: " + path);
  f << text;
  if (!f) throw OutputError("failed writing output file: " + path);
}

}  // namespace mgwt::cli
