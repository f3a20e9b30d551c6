#include "dwimpute/table.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dwimpute/errors.hpp"

namespace dwimpute {

namespace {

struct RawRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

// Minimal RFC-4180 reader: quoted fields may contain separators, doubled
// quotes and line breaks. LF and CRLF line endings are both accepted.
class CsvReader {
 public:
  explicit CsvReader(std::string text) : text_(std::move(text)) {
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  std::optional<RawRecord> next() {
    if (pos_ >= text_.size()) return std::nullopt;
    RawRecord record;
    record.line = line_;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            field.push_back('"');
            pos_ += 2;
            continue;
          }
          in_quotes = false;
          ++pos_;
          continue;
        }
        if (c == '\n') ++line_;
        field.push_back(c);
        ++pos_;
        continue;
      }
      if (c == '"' && !was_quoted && trim(field).empty()) {
        field.clear();
        in_quotes = true;
        was_quoted = true;
        ++pos_;
        continue;
      }
      if (c == ',') {
        record.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
        ++pos_;
        continue;
      }
      if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
        ++pos_;
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        record.fields.push_back(std::move(field));
        return record;
      }
      field.push_back(c);
      ++pos_;
    }
    if (in_quotes) {
      throw FormatError("unterminated quoted field starting on line " + std::to_string(record.line));
    }
    record.fields.push_back(std::move(field));
    return record;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

bool is_blank_record(const RawRecord& record) {
  return record.fields.size() == 1 && trim(record.fields[0]).empty();
}

}  // namespace

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

std::string to_string(const CellAddress& address) {
  return address.dimension + "[" + std::to_string(address.row) + "]." + address.attribute;
}

InstanceTable::InstanceTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::optional<std::size_t> InstanceTable::find_column(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::size_t InstanceTable::column_index(std::string_view name) const {
  if (auto index = find_column(name)) return *index;
  throw UnknownAttributeError("unknown column '" + std::string(name) + "'");
}

void InstanceTable::append_row(Row row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

InstanceTable read_table(std::istream& in, const CsvOptions& options) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CsvReader reader(std::move(text));

  auto header = reader.next();
  if (!header || is_blank_record(*header)) throw FormatError("missing CSV header row");

  std::vector<std::string> columns;
  std::unordered_set<std::string> seen;
  for (const auto& raw : header->fields) {
    auto name = trim(raw);
    if (!seen.insert(name).second) throw FormatError("duplicate column '" + name + "' in header");
    columns.push_back(std::move(name));
  }

  InstanceTable table(std::move(columns));
  while (auto record = reader.next()) {
    // A blank line is an all-null row only when the table has a single column.
    if (table.column_count() != 1 && is_blank_record(*record)) continue;
    if (record->fields.size() != table.column_count()) {
      throw FormatError("ragged row on line " + std::to_string(record->line) + ": expected " +
                        std::to_string(table.column_count()) + " fields, found " +
                        std::to_string(record->fields.size()));
    }
    Row row;
    row.reserve(record->fields.size());
    for (const auto& raw : record->fields) {
      auto value = trim(raw);
      if (options.null_tokens.contains(value)) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(value));
      }
    }
    table.append_row(std::move(row));
  }
  return table;
}

InstanceTable load_table(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table '" + path.string() + "'");
  try {
    return read_table(in, options);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                            (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_table(const InstanceTable& table, std::ostream& out) {
  const auto& columns = table.columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (row[c]) out << csv_escape(*row[c]);
    }
    out << '\n';
  }
}

void write_table(const InstanceTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write table '" + path.string() + "'");
  write_table(table, out);
  out.flush();
  if (!out) throw IoError("failed writing table '" + path.string() + "'");
}

std::vector<CellAddress> missing_cells(const InstanceTable& table, std::string_view dimension,
                                       std::string_view attribute) {
  const auto column = table.column_index(attribute);
  std::vector<CellAddress> out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (!table.at(r, column)) out.push_back({std::string(dimension), r, std::string(attribute)});
  }
  return out;
}

}  // namespace dwimpute
