#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rispoof {

/// Comma-separated table. The file starts with a provenance comment line
/// ("# config_hash=<hex> seed=<n> experiment=<name>") followed by one header
/// line; column names carry their unit as a suffix (angle_deg, peb_m, ...).
class Table {
 public:
  Table(std::string experiment, std::vector<std::string> columns);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  /// Cells are pre-formatted; numbers go through format_number.
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  std::string render(std::uint64_t config_hash, std::uint64_t seed) const;
  void write(const std::filesystem::path& path, std::uint64_t config_hash,
             std::uint64_t seed) const;

 private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parsed CSV produced by Table::render.
struct TableData {
  std::string comment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

TableData read_table(const std::filesystem::path& path);

}  // namespace rispoof
