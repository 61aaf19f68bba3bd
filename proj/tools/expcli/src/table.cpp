#include "expcli/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace expcli {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string python_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? ", " : "") + std::string("\"") + items[i] + "\"";
  }
  return out + "]";
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

void Table::append(const Table& other) {
  if (columns_.empty() && rows_.empty()) columns_ = other.columns_;
  if (other.columns_ != columns_) throw std::invalid_argument("column mismatch");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::optional<std::size_t> Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<double> Table::number(std::size_t row, const std::string& column) const {
  const auto col = column_index(column);
  if (!col) return std::nullopt;
  const Cell& cell = rows_.at(row)[*col];
  if (const auto* d = std::get_if<double>(&cell); d && !std::isnan(*d)) return *d;
  if (const auto* n = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*n);
  return std::nullopt;
}

std::optional<std::string> Table::label(std::size_t row, const std::string& column) const {
  const auto col = column_index(column);
  if (!col) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&rows_.at(row)[*col])) return *s;
  return std::nullopt;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << quote_if_needed(columns_[i]);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

std::string Table::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      Overloaded{
          [](std::monostate) { return std::string(); },
          [](double v) {
            if (std::isnan(v)) return std::string();
            if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return std::string(buf);
          },
          [](std::int64_t v) { return std::to_string(v); },
          [](const std::string& s) { return quote_if_needed(s); },
      },
      cell);
}

Cell optional_cell(const std::optional<double>& value) {
  if (value) return *value;
  return std::monostate{};
}

std::string plot_script(const Table& table, const PlotSpec& spec) {
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
        "import csv\n"
        "import io\n"
        "import pathlib\n"
        "\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "DATA = \"\"\"\\\n"
     << table.to_csv()
     << "\"\"\"\n"
        "\n"
        "X = \"" << spec.x_column << "\"\n"
     << "YS = " << python_list(spec.y_columns) << "\n"
     << "GROUPS = " << python_list(spec.group_columns) << "\n"
     << "LOG_X = " << (spec.log_x ? "True" : "False") << "\n"
     << "TITLE = \"" << spec.title << "\"\n"
     << "\n"
        "rows = list(csv.DictReader(io.StringIO(DATA)))\n"
        "lines = {}\n"
        "for row in rows:\n"
        "    key = tuple(f\"{g}={row[g]}\" for g in GROUPS)\n"
        "    lines.setdefault(key, []).append(row)\n"
        "\n"
        "fig, axes = plt.subplots(len(YS), 1, figsize=(7, 3.2 * len(YS)), squeeze=False)\n"
        "for ax, y in zip(axes[:, 0], YS):\n"
        "    for key, members in lines.items():\n"
        "        pts = [(float(r[X]), float(r[y])) for r in members if r[X] and r[y]]\n"
        "        if pts:\n"
        "            xs, vals = zip(*pts)\n"
        "            ax.plot(xs, vals, marker=\".\", label=\", \".join(key) or y)\n"
        "    ax.set_xlabel(X)\n"
        "    ax.set_ylabel(y)\n"
        "    if LOG_X:\n"
        "        ax.set_xscale(\"log\")\n"
        "    ax.grid(True, alpha=0.3)\n"
        "    if len(lines) > 1:\n"
        "        ax.legend(fontsize=\"small\")\n"
        "axes[0, 0].set_title(TITLE)\n"
        "fig.tight_layout()\n"
        "out = pathlib.Path(__file__).with_suffix(\".png\")\n"
        "fig.savefig(out, dpi=150)\n"
        "print(out)\n";
  return py.str();
}

}  // namespace expcli
