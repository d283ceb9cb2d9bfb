#include "qnd_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qnd/errors.hpp"

namespace qnd::cli {

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_spectrum_csv(const std::string& comment, const FrequencyGrid& grid, const std::vector<double>& values,
                                const std::vector<ExtraColumn>& extra) {
  if (values.size() != grid.size()) throw InvalidInput("csv: value count does not match the grid");
  for (const auto& c : extra)
    if (c.values.size() != grid.size()) throw InvalidInput("csv: column " + c.name + " does not match the grid");
  std::string out = "# " + comment + "\n";
  out += "omega_L_MHz,S_value";
  for (const auto& c : extra) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format("%.6f", grid.at(i).mhz());
    out += "," + format("%.11e", values[i]);
    for (const auto& c : extra) out += "," + format(c.integer ? "%.0f" : "%.11e", c.values[i]);
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (table.comment.empty() && !have_header) table.comment = line.size() > 2 ? line.substr(2) : "";
      continue;
    }
    const auto fields = split(line);
    if (!have_header) {
      table.columns = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw InvalidInput(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.columns.size()) +
                         " columns, found " + std::to_string(fields.size()));
    std::vector<double> row;
    for (const auto& f : fields) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw InvalidInput(source + ":" + std::to_string(line_no) + ": not a number: '" + f + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw InvalidInput(source + ": empty CSV");
  if (table.rows.empty()) throw InvalidInput(source + ": CSV has no data rows");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

SampledSpectrum spectrum_from_table(const CsvTable& table, const std::string& source) {
  if (table.columns.size() < 2) throw InvalidInput(source + ": need at least two columns (omega_L_MHz, S_value)");
  if (table.rows.size() < 2) throw InvalidInput(source + ": need at least two rows");
  const double first = table.rows.front()[0];
  const double last = table.rows.back()[0];
  const FrequencyGrid grid(AngularFrequency::from_mhz(first), AngularFrequency::from_mhz(last), table.rows.size());
  // Six printed decimals bound the rounding at 5e-7 MHz.
  const double tol = 1e-6 + 1e-9 * std::abs(last - first);
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (std::abs(table.rows[i][0] - grid.at(i).mhz()) > tol)
      throw InvalidInput(source + ": frequency column is not uniformly spaced (row " + std::to_string(i + 1) + ")");
    values.push_back(table.rows[i][1]);
  }
  return {grid, std::move(values)};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput(path + ": cannot open for writing");
  out << text;
  if (!out) throw InvalidInput(path + ": write failed");
}

}  // namespace qnd::cli
