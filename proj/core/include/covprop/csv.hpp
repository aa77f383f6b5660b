#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace covprop {

/// Formats a double with 17 significant digits ("%.17g").
std::string format_real(double value);

/// Shortest text that parses back to the same double ("0.05", not
/// "0.050000000000000003").
std::string format_shortest(double value);

/// In-memory CSV table: one header row, comma separated, no quoting (no cell
/// ever contains a comma).
class CsvTable {
 public:
  CsvTable(std::string file_name, std::vector<std::string> columns);

  const std::string& file_name() const { return file_name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
  void add_text_row(std::vector<std::string> cells);

  bool has_column(const std::string& name) const;
  /// Parses every cell of a numeric column. Throws std::out_of_range for an
  /// unknown column.
  std::vector<double> column(const std::string& name) const;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t index_of(const std::string& name) const;

  std::string file_name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace covprop
