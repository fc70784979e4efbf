#include "qres/csv.hpp"

#include <cstdio>
#include <fstream>

#include "qres/errors.hpp"

namespace qres {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::string comment, std::vector<std::string> columns)
    : comment_(std::move(comment)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorKind::grid_mismatch, "csv row has " + std::to_string(row.size()) + " fields, expected " +
                                              std::to_string(columns_.size()));
  }
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  if (!comment_.empty()) out += "# " + comment_ + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::config, "cannot open '" + path.string() + "' for writing");
  f << str();
  if (!f) throw Error(ErrorKind::config, "failed writing '" + path.string() + "'");
}

}  // namespace qres
