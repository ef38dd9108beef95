#pragma once

#include <algorithm>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/ordered_value.hpp"
#include "successodds/sample.hpp"

namespace successodds {

struct CsvConfig {
  std::string value_column = "value";
  std::string group_column = "group";
  std::optional<std::string> stratum_column;
  Scale scale = Scale::numeric(0);
  /// Tolerate lines with no content at all; partially blank rows still fail.
  bool skip_blank_rows = false;
};

namespace detail {

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
  bool blank = false;
};

// RFC 4180 tokenizer: quoted fields may contain commas, doubled quotes and
// line breaks. CRLF and LF line endings are both accepted.
inline std::vector<CsvRow> split_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // UTF-8 BOM
  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool quoted_field = false;
    bool row_done = false;
    while (!row_done) {
      if (i >= text.size()) {
        row.fields.push_back(std::move(field));
        break;
      }
      char c = text[i];
      if (c == '"' && field.empty() && !quoted_field) {
        quoted_field = true;
        ++i;
        while (true) {
          if (i >= text.size()) {
            fail(ErrorCode::parse, "unterminated quoted field, row " + std::to_string(row.line));
          }
          if (text[i] == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (text[i] == '\n') ++line;
          field += text[i++];
        }
        continue;
      }
      if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++i;
        continue;
      }
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (c == '\n' || c == '\r') {
        row.fields.push_back(std::move(field));
        ++i;
        ++line;
        row_done = true;
        continue;
      }
      if (quoted_field) {
        fail(ErrorCode::parse, "text after closing quote, row " + std::to_string(row.line));
      }
      field += c;
      ++i;
    }
    row.blank = row.fields.size() == 1 && trim(row.fields[0]).empty();
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string quote_csv(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Parses CSV text into a Dataset. Row numbers in error messages count the
/// header as row 1.
inline Dataset parse_csv(std::string_view text, const CsvConfig& config) {
  auto rows = detail::split_csv(text);
  while (!rows.empty() && rows.back().blank) rows.pop_back();
  if (rows.empty()) fail(ErrorCode::parse, "empty file");

  const auto& header = rows.front().fields;
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (detail::trim(header[i]) == name) return i;
    }
    fail(ErrorCode::parse, "missing required column '" + name + "'");
  };
  const std::size_t value_col = column(config.value_column);
  const std::size_t group_col = column(config.group_column);
  std::optional<std::size_t> stratum_col;
  if (config.stratum_column) stratum_col = column(*config.stratum_column);

  std::vector<Record> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = ", row " + std::to_string(r + 1);
    if (row.blank) {
      if (config.skip_blank_rows) continue;
      fail(ErrorCode::parse, "blank row" + where);
    }
    if (row.fields.size() != header.size()) {
      fail(ErrorCode::parse, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(row.fields.size()) + where);
    }
    auto cell = [&](std::size_t col) -> std::string {
      std::string text(detail::trim(row.fields[col]));
      if (text.empty()) fail(ErrorCode::parse, "empty cell in column '" + header[col] + "'" + where);
      return text;
    };
    Record rec;
    std::string raw = cell(value_col);
    try {
      rec.value = config.scale.parse_value(raw);
    } catch (const Error& e) {
      throw Error(e.code(), e.what() + where);
    }
    rec.group = cell(group_col);
    if (stratum_col) rec.stratum = cell(*stratum_col);
    records.push_back(std::move(rec));
  }
  return Dataset(config.scale, std::move(records));
}

/// Smallest numeric scale that holds every value cell exactly. Cells that do not look numeric are skipped here and rejected
/// later by parse_csv.
inline Scale infer_numeric_scale(std::string_view text, const std::string& value_column) {
  auto rows = detail::split_csv(text);
  if (rows.empty()) fail(ErrorCode::parse, "empty file");
  const auto& header = rows.front().fields;
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (detail::trim(header[i]) == value_column) col = i;
  }
  if (col == header.size()) fail(ErrorCode::parse, "missing required column '" + value_column + "'");
  int decimals = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].blank || col >= rows[r].fields.size()) continue;
    std::string_view cell = detail::trim(rows[r].fields[col]);
    auto cut = cell.find_first_of("eE");
    if (cut != std::string_view::npos) cell = cell.substr(0, cut);
    if (auto dot = cell.find('.'); dot != std::string_view::npos) {
      std::string_view frac = cell.substr(dot + 1);
      while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
      decimals = std::max(decimals, static_cast<int>(frac.size()));
    }
  }
  return Scale::numeric(std::min(decimals, kMaxDecimals));
}

inline Dataset parse_csv(std::istream& in, const CsvConfig& config) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_csv(std::string_view(text), config);
}

/// Serializes with the configured column names; values are written at the
/// dataset's decimal scale so that parse_csv reproduces them exactly.
inline std::string write_csv(const Dataset& data, const CsvConfig& config) {
  std::ostringstream out;
  out << detail::quote_csv(config.value_column) << ',' << detail::quote_csv(config.group_column);
  if (config.stratum_column) out << ',' << detail::quote_csv(*config.stratum_column);
  out << '\n';
  for (const auto& rec : data.records()) {
    out << detail::quote_csv(data.scale().format(rec.value)) << ',' << detail::quote_csv(rec.group);
    if (config.stratum_column) out << ',' << detail::quote_csv(rec.stratum.value_or(""));
    out << '\n';
  }
  return out.str();
}

}  // namespace successodds
