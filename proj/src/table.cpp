#include "rispoof/table.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rispoof/scenario.hpp"

namespace rispoof {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table::Table(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("table needs at least one column");
  for (const auto& c : columns_) {
    if (c.empty() || c.find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("invalid column name '" + c + "'");
    }
  }
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(cells.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  for (const auto& c : cells) {
    if (c.find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("cell contains a separator: '" + c + "'");
    }
  }
  rows_.push_back(std::move(cells));
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (const double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string Table::render(std::uint64_t config_hash, std::uint64_t seed) const {
  std::ostringstream out;
  out << "# config_hash=" << hash_hex(config_hash) << " seed=" << seed
      << " experiment=" << experiment_ << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

void Table::write(const std::filesystem::path& path, std::uint64_t config_hash,
                  std::uint64_t seed) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render(config_hash, seed);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::size_t TableData::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

double TableData::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(cell);
}

TableData read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  TableData t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error(path.string() + ": missing provenance line");
  }
  t.comment = line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::runtime_error(path.string() + ": ragged row");
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace rispoof
