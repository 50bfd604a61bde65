#include "mgap/experiment/csv.hpp"

#include <charconv>
#include <cmath>

#include "mgap/errors.hpp"

namespace mgap {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string render(const CsvCell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find(',') != std::string::npos ||
          v.find('\n') != std::string::npos)
        throw config_error("CSV cell contains a separator character");
      return v;
    }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {
  if (header_.empty()) throw config_error("CSV needs a header");
}

void CsvTable::add_row(std::vector<CsvCell> cells) {
  if (cells.size() != header_.size())
    throw config_error("CSV row width does not match the header");
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const CsvCell& c : cells) row.push_back(render(c));
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i > 0) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace mgap
