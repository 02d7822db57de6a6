#include "sinest/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sinest/error.hpp"

namespace sinest {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ExperimentTable::ExperimentTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  if (columns_.empty()) throw Error(ErrorKind::invalid_argument, "table needs columns");
}

void ExperimentTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorKind::invalid_argument, "row has " + std::to_string(row.size()) +
                                                 " cells, schema has " +
                                                 std::to_string(columns_.size()));
  }
  for (const auto& cell : row) {
    if (const auto* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) {
      throw Error(ErrorKind::invalid_argument, "non-finite numeric cell");
    }
  }
  rows_.push_back(std::move(row));
}

void ExperimentTable::add_comment(std::string line) { comments_.push_back(std::move(line)); }

std::size_t ExperimentTable::column_index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw Error(ErrorKind::invalid_argument, "no column " + name);
  return static_cast<std::size_t>(it - columns_.begin());
}

double ExperimentTable::number(std::size_t row, const std::string& column) const {
  const Cell& cell = rows_.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw Error(ErrorKind::invalid_argument, "column " + column + " is not numeric");
}

std::string ExperimentTable::text(std::size_t row, const std::string& column) const {
  const Cell& cell = rows_.at(row).at(column_index(column));
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return format_number(std::get<double>(cell));
}

void ExperimentTable::write_csv(std::ostream& os) const {
  for (const auto& c : comments_) os << "# " << c << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_number(v);
            } else {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

std::string ExperimentTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

}  // namespace sinest
