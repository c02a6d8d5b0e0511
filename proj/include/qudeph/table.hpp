#pragma once

// Tabular results: RFC-4180-style CSV with a '#'-prefixed metadata header,
// floating point serialized with 17 significant digits. Gap cells (undefined
// geometric phase) are empty fields; everything else must be finite.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qudeph/linalg.hpp"

namespace qudeph {

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw numeric_error("table: refusing to serialize a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ResultTable {
  std::string name;                            // observable tag, used in filenames
  std::vector<std::string> meta;               // emitted as '# ...' lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // pre-formatted cells; "" is a gap

  static std::string cell(double v) { return format_number(v); }

  std::string to_csv() const {
    std::string out;
    out += "# qudeph ";
    out += kVersion;
    out += "\n";
    for (const auto& m : meta) {
      out += "# ";
      out += m;
      out += "\n";
    }
    for (size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += columns[c];
    }
    out += "\n";
    for (const auto& row : rows) {
      if (row.size() != columns.size())
        throw numeric_error("table: row width does not match header");
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) out += ",";
        out += row[c];
      }
      out += "\n";
    }
    return out;
  }
};

}  // namespace qudeph
