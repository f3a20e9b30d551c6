#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dwimpute {

// A cell is either a (trimmed, non-empty after normalization) text value or null.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

struct CellAddress {
  std::string dimension;
  std::size_t row = 0;
  std::string attribute;

  auto operator<=>(const CellAddress&) const = default;
};

std::string to_string(const CellAddress& address);

// Row store for the instances of one dimension. Row order is stable: nothing
// in the library reorders rows, so row indices are valid identifiers for the
// lifetime of a table.
class InstanceTable {
 public:
  InstanceTable() = default;
  explicit InstanceTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_.size(); }

  // Throws UnknownAttributeError.
  std::size_t column_index(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
  bool has_column(std::string_view name) const { return find_column(name).has_value(); }

  // Throws std::invalid_argument when the row width does not match.
  void append_row(Row row);

  const Row& row(std::size_t index) const { return rows_.at(index); }
  const Cell& at(std::size_t row, std::size_t column) const { return rows_[row][column]; }
  Cell& at(std::size_t row, std::size_t column) { return rows_[row][column]; }

  const std::vector<Row>& rows() const { return rows_; }

  bool operator==(const InstanceTable&) const = default;

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

struct CsvOptions {
  std::set<std::string> null_tokens{""};
};

InstanceTable read_table(std::istream& in, const CsvOptions& options = {});
InstanceTable load_table(const std::filesystem::path& path, const CsvOptions& options = {});

void write_table(const InstanceTable& table, std::ostream& out);
void write_table(const InstanceTable& table, const std::filesystem::path& path);

// Null cells of `attribute`, in row order. Throws UnknownAttributeError.
std::vector<CellAddress> missing_cells(const InstanceTable& table, std::string_view dimension,
                                       std::string_view attribute);

// RFC-4180 field quoting, shared by every CSV writer in the project.
std::string csv_escape(std::string_view field);

std::string trim(std::string_view text);

}  // namespace dwimpute
