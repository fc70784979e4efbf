#pragma once

// Deterministic CSV output: 17 significant digits, '.' decimal separator,
// '\n' line endings, one leading comment line.

#include <filesystem>
#include <string>
#include <vector>

namespace qres {

std::string format_number(double v);

class CsvTable {
 public:
  CsvTable(std::string comment, std::vector<std::string> columns);

  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string comment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace qres
