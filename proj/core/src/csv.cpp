#include "covprop/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace covprop {

std::string format_real(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_shortest(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return format_real(value);
  return std::string(buf, ptr);
}

CsvTable::CsvTable(std::string file_name, std::vector<std::string> columns)
    : file_name_(std::move(file_name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
}

void CsvTable::add_row(std::initializer_list<double> values) {
  add_row(std::vector<double>(values));
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("CsvTable " + file_name_ + ": row width does not match header");
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_text_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvTable " + file_name_ + ": row width does not match header");
  rows_.push_back(std::move(cells));
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t CsvTable::index_of(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::out_of_range("CsvTable " + file_name_ + ": no column " + name);
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t j = index_of(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(std::strtod(row[j].c_str(), nullptr));
  return out;
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  auto emit = [&os](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) os << ',';
      os << cells[j];
    }
    os << '\n';
  };
  emit(columns_);
  for (const auto& row : rows_) emit(row);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_string();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace covprop
