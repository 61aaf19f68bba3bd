#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace expcli {

/// Empty (missing), number, count or label.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

/// Fixed set of columns; every row carries exactly one cell per column.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns);

  /// Throws std::invalid_argument when the row width does not match.
  void add_row(std::vector<Cell> row);
  void append(const Table& other);

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] std::optional<std::size_t> column_index(const std::string& name) const;

  /// Numeric value of a cell, empty when missing or not a number.
  [[nodiscard]] std::optional<double> number(std::size_t row, const std::string& column) const;
  [[nodiscard]] std::optional<std::string> label(std::size_t row, const std::string& column) const;

  /// Comma separated, header first, 12 significant digits, missing cells empty.
  void write_csv(std::ostream& out) const;
  [[nodiscard]] std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// %.12g; NaN is treated as missing and rendered empty.
[[nodiscard]] std::string format_cell(const Cell& cell);

/// Optional value to cell, empty when absent.
[[nodiscard]] Cell optional_cell(const std::optional<double>& value);

/// How to draw a table: one line per distinct combination of the group
/// columns and per y column.
struct PlotSpec {
  std::string x_column;
  std::vector<std::string> y_columns;
  std::vector<std::string> group_columns;
  bool log_x = false;
  std::string title;
};

/// Self-contained matplotlib script with the CSV embedded. Writes a PNG next
/// to itself when run.
[[nodiscard]] std::string plot_script(const Table& table, const PlotSpec& spec);

}  // namespace expcli
