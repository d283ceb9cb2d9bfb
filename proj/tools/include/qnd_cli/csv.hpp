#pragma once

// Spectrum CSV: one "# key=value ..." comment line, a column header, then rows
// "omega_L_MHz,S_value[,extra...]" with LF endings.

#include <filesystem>
#include <string>
#include <vector>

#include "qnd/model.hpp"

namespace qnd::cli {

struct CsvTable {
  std::string comment;               // text after "# " on the first line, may be empty
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExtraColumn {
  std::string name;
  std::vector<double> values;
  bool integer = false;  // printed with %.0f
};

/// "%.6f" for the frequency column, "%.11e" for S and non-integer extras.
std::string format_spectrum_csv(const std::string& comment, const FrequencyGrid& grid, const std::vector<double>& values,
                                const std::vector<ExtraColumn>& extra = {});

/// Throws InvalidInput with the line number on malformed input.
CsvTable parse_csv(const std::string& text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Rebuilds the uniform grid of the first column (in MHz) and returns it with the second column.
struct SampledSpectrum {
  FrequencyGrid grid;
  std::vector<double> values;
};
SampledSpectrum spectrum_from_table(const CsvTable& table, const std::string& source);

/// Writes to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace qnd::cli
