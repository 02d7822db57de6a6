#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace sinest {

using Cell = std::variant<std::string, std::int64_t, double>;

/// Rows of condition/metric cells under a fixed schema, written as CSV.
class ExperimentTable {
 public:
  explicit ExperimentTable(std::vector<std::string> columns);

  /// Throws invalid-argument on an arity mismatch or a non-finite number.
  void add_row(std::vector<Cell> row);
  void add_comment(std::string line);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  const std::vector<std::string>& comments() const noexcept { return comments_; }

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  std::string text(std::size_t row, const std::string& column) const;

  /// '#'-prefixed comment lines, a header row, then one line per row.
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::string> comments_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

}  // namespace sinest
