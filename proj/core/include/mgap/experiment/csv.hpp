#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mgap {

// One CSV cell; monostate renders as an empty field.
using CsvCell = std::variant<std::monostate, long long, double, bool, std::string>;

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Builds comma-separated text with a header row and LF endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mgap
