#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qwb {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Numeric table emitted as UTF-8 CSV: header row, ',' separator, '\n' line ends.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::string to_string() const;
  void write(std::ostream& os) const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace qwb
