#include "tdabm/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

#include "tdabm/error.hpp"

namespace tdabm {

NaPolicy parse_na_policy(std::string_view s) {
  if (s == "error") return NaPolicy::Error;
  if (s == "drop-row") return NaPolicy::DropRow;
  throw std::invalid_argument("unknown NA policy '" + std::string(s) + "'");
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("unknown column '" + std::string(name) + "'");
}

namespace {

// Splits one record, honouring double-quoted fields with "" escapes. Quoted
// fields may not span lines.
std::vector<std::string> split_record(std::string_view line, char delimiter, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(cur));
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Finite numeric cell, or nothing.
std::optional<double> parse_cell(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

CsvTable parse_csv(std::string_view text, char delimiter) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, delimiter, line_no);
    if (!have_header) {
      for (auto& f : fields) f = std::string(trim(f));
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw DataError("CSV input is empty");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), delimiter);
}

LoadedData select_columns(const CsvTable& table, const std::vector<std::string>& axis_columns,
                          const std::string& outcome_column, NaPolicy na_policy,
                          const std::vector<std::string>& extra_columns) {
  if (axis_columns.empty()) throw std::invalid_argument("at least one axis column is required");
  std::set<std::string> axis_set(axis_columns.begin(), axis_columns.end());
  if (axis_set.size() != axis_columns.size()) throw std::invalid_argument("duplicate axis column");
  if (!outcome_column.empty() && axis_set.contains(outcome_column)) {
    throw std::invalid_argument("outcome column '" + outcome_column + "' is also an axis");
  }

  std::vector<std::size_t> axis_idx;
  for (const auto& name : axis_columns) axis_idx.push_back(table.column(name));
  const std::optional<std::size_t> outcome_idx =
      outcome_column.empty() ? std::nullopt : std::optional(table.column(outcome_column));
  std::vector<std::size_t> extra_idx;
  for (const auto& name : extra_columns) extra_idx.push_back(table.column(name));

  std::vector<std::size_t> selected = axis_idx;
  if (outcome_idx) selected.push_back(*outcome_idx);

  std::vector<std::vector<double>> kept;
  std::vector<std::size_t> source_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<double> values;
    bool ok = true;
    for (std::size_t c : selected) {
      const auto v = parse_cell(table.rows[r][c]);
      if (!v) {
        if (na_policy == NaPolicy::Error) {
          throw DataError("non-numeric value '" + table.rows[r][c] + "' in column '" +
                          table.header[c] + "' at data row " + std::to_string(r + 1));
        }
        ok = false;
        break;
      }
      values.push_back(*v);
    }
    if (!ok) continue;
    // Extra columns never decide which rows are kept.
    for (std::size_t c : extra_idx) {
      const auto v = parse_cell(table.rows[r][c]);
      if (!v) {
        throw DataError("non-numeric value '" + table.rows[r][c] + "' in column '" +
                        table.header[c] + "' at data row " + std::to_string(r + 1));
      }
      values.push_back(*v);
    }
    kept.push_back(std::move(values));
    source_rows.push_back(r);
  }
  if (kept.empty()) throw DataError("no data rows remain");

  const auto n = static_cast<Eigen::Index>(kept.size());
  const auto k = static_cast<Eigen::Index>(axis_idx.size());
  PointCloudd::Matrix axes(n, k);
  LoadedData out;
  out.outcome.values.resize(outcome_idx ? n : 0);
  out.outcome.name = outcome_column;
  for (const auto& name : extra_columns) out.extra[name].resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = kept[static_cast<std::size_t>(i)];
    std::size_t c = 0;
    for (Eigen::Index j = 0; j < k; ++j) axes(i, j) = row[c++];
    if (outcome_idx) out.outcome.values(i) = row[c++];
    for (const auto& name : extra_columns) out.extra[name](i) = row[c++];
  }
  out.points = make_point_cloud<double>(std::move(axes), axis_columns);
  out.source_rows = std::move(source_rows);
  return out;
}

LoadedData load_table(const std::filesystem::path& path,
                      const std::vector<std::string>& axis_columns,
                      const std::string& outcome_column, const CsvOptions& options,
                      const std::vector<std::string>& extra_columns) {
  return select_columns(read_csv(path, options.delimiter), axis_columns, outcome_column,
                        options.na_policy, extra_columns);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_table(const PointCloudd& points, const OutcomeVectord* outcome, char delimiter) {
  const bool with_outcome = outcome != nullptr && outcome->size() > 0;
  if (with_outcome && outcome->size() != points.size()) {
    throw std::invalid_argument("outcome length does not match point count");
  }
  std::string out;
  for (std::size_t j = 0; j < points.column_names.size(); ++j) {
    if (j) out.push_back(delimiter);
    out += points.column_names[j];
  }
  if (with_outcome) {
    out.push_back(delimiter);
    out += outcome->name;
  }
  out.push_back('\n');
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    for (Eigen::Index j = 0; j < points.dims(); ++j) {
      if (j) out.push_back(delimiter);
      out += format_number(points.values(i, j));
    }
    if (with_outcome) {
      out.push_back(delimiter);
      out += format_number(outcome->values(i));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace tdabm
