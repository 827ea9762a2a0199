#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tdabm/point_cloud.hpp"

namespace tdabm {

enum class NaPolicy { Error, DropRow };

NaPolicy parse_na_policy(std::string_view s);

struct CsvOptions {
  char delimiter = ',';
  NaPolicy na_policy = NaPolicy::Error;
};

/// Header plus raw cell text, rows in file order.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Position of a named column; throws DataError when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');
CsvTable parse_csv(std::string_view text, char delimiter = ',');

/// Axes, outcome and any extra numeric columns taken from the same retained
/// rows. `source_rows` holds the 0-based data-row index in the file for each
/// retained row.
struct LoadedData {
  PointCloudd points;
  OutcomeVectord outcome;
  std::map<std::string, Eigen::VectorXd> extra;
  std::vector<std::size_t> source_rows;
};

/// Selects numeric columns by name. Axis or outcome cells that do not parse as finite
/// numbers are an error under NaPolicy::Error; under DropRow the whole row
/// is skipped (in every selected column) and the remaining rows are
/// re-sequenced. Extra columns must be numeric on every retained row. An
/// empty `outcome_column` yields an empty outcome.
LoadedData select_columns(const CsvTable& table, const std::vector<std::string>& axis_columns,
                          const std::string& outcome_column, NaPolicy na_policy,
                          const std::vector<std::string>& extra_columns = {});

LoadedData load_table(const std::filesystem::path& path,
                      const std::vector<std::string>& axis_columns,
                      const std::string& outcome_column, const CsvOptions& options = {},
                      const std::vector<std::string>& extra_columns = {});

/// Writes axes then the outcome column (when non-empty) with shortest
/// round-trip number formatting, so load_table reproduces the values exactly.
std::string format_table(const PointCloudd& points, const OutcomeVectord* outcome,
                         char delimiter = ',');

/// Shortest decimal string that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace tdabm
