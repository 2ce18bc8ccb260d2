#include "metaestim/csv.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace metaestim::csv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::vector<double> Table::column(std::string_view name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

Table parse_table(std::string_view text) {
  Table t;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) t.header.push_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                                  " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      if (trim(f).empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        row.push_back(parse_double(f));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument("empty CSV: no header row");
  return t;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

TimeSeries to_time_series(const Table& table) {
  if (table.header.empty()) throw std::invalid_argument("table has no columns");
  std::size_t tcol = table.header.size();
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == "t") tcol = i;
  std::vector<double> t;
  t.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    t.push_back(tcol < table.header.size() ? table.rows[i][tcol] : static_cast<double>(i));
  TimeSeries ts(std::move(t));
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == tcol) continue;
    std::vector<double> col;
    col.reserve(table.rows.size());
    for (const auto& r : table.rows) col.push_back(r[j]);
    ts.add_channel(table.header[j], std::move(col));
  }
  return ts;
}

void write_time_series(std::ostream& os, const TimeSeries& ts) {
  os << 't';
  for (const auto& [name, _] : ts.channels()) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << format_double(ts.t()[i]);
    for (const auto& [_, values] : ts.channels()) os << ',' << format_double(values[i]);
    os << '\n';
  }
}

void write_best(std::ostream& os, const ParameterSpace& space, const Candidate& best) {
  for (const auto& p : space.params()) os << p.name << ',';
  os << "pset,fitness\n";
  for (const double v : best.values) os << format_double(v) << ',';
  os << best.pset << ',' << format_double(best.fitness) << '\n';
}

void write_candidates(std::ostream& os, const ParameterSpace& space, std::span<const Candidate> rows) {
  for (const auto& p : space.params()) os << p.name << ',';
  os << "pset,iteration,fitness\n";
  for (const auto& c : rows) {
    for (const double v : c.values) os << format_double(v) << ',';
    os << c.pset << ',' << c.iteration << ',' << format_double(c.fitness) << '\n';
  }
}

}  // namespace metaestim::csv
