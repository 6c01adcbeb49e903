#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace rdchain {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

/// Splits a CSV line on commas; quoting is not supported.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace rdchain
