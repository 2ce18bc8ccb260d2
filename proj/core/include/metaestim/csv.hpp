#ifndef METAESTIM_CSV_HPP
#define METAESTIM_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaestim/core.hpp"
#include "metaestim/dynamics.hpp"

namespace metaestim::csv {

/// Shortest decimal text that reads back to exactly v.
std::string format_double(double v);
/// Strict parse of a whole field; throws std::invalid_argument.
double parse_double(std::string_view text);

/// Header row plus numeric data rows. Comma separator, `.` decimal point,
/// no quoting; blank lines are skipped and a trailing '\r' is tolerated.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws std::out_of_range for an unknown column.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

/// Empty fields read as NaN (missing). Throws std::invalid_argument on
/// ragged rows or non-numeric fields.
Table parse_table(std::string_view text);
Table read_table(const std::filesystem::path& path);

/// The "t" column becomes the time axis and every other column a channel.
/// Without a "t" column the row index is used as time.
TimeSeries to_time_series(const Table& table);
void write_time_series(std::ostream& os, const TimeSeries& ts);

/// Parameter columns followed by pset and fitness.
void write_best(std::ostream& os, const ParameterSpace& space, const Candidate& best);
/// Parameter columns followed by pset, iteration and fitness.
void write_candidates(std::ostream& os, const ParameterSpace& space, std::span<const Candidate> rows);

}  // namespace metaestim::csv

#endif  // METAESTIM_CSV_HPP
