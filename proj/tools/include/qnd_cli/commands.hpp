#pragma once

// Subcommand bodies. Each returns the process exit code (0 ok, 2 invalid
// input or failed validation, 3 numerical non-convergence) and lets
// qnd::InvalidInput / qnd::NumericalFailure propagate for the caller to map.

#include <iosfwd>
#include <string>
#include <string_view>

#include "qnd_cli/config.hpp"
#include "qnd_cli/csv.hpp"

namespace qnd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

enum class SpectrumMethod { Exact, Fast, MeanField, Closed1, Closed2, Mixture };

SpectrumMethod parse_method(std::string_view name);
std::string_view to_string(SpectrumMethod method);

int cmd_validate(const RunConfig& config, std::ostream& out);

std::string spectrum_csv(const RunConfig& config, SpectrumMethod method);
int cmd_spectrum(const RunConfig& config, SpectrumMethod method, const std::string& out_path);

struct OracleCsv {
  std::string text;
  bool all_converged = true;
};
OracleCsv oracle_csv(const RunConfig& config);
int cmd_oracle(const RunConfig& config, const std::string& out_path, std::ostream& err);

struct DecayCsvs {
  std::string populations;
  std::string spectrum;
};
DecayCsvs decay_csvs(const RunConfig& config);
int cmd_decay(const RunConfig& config, const std::string& populations_path, const std::string& spectrum_path,
              std::ostream& err);

std::string average_csv(const RunConfig& config);
int cmd_average(const RunConfig& config, const std::string& out_path, std::ostream& err);

/// JSON report text (2-space indented, trailing newline).
std::string infer_report(const RunConfig& config, const CsvTable& table, const std::string& source);
int cmd_infer(const RunConfig& config, const std::string& input_path, const std::string& out_path);

int cmd_plot(const std::string& input_path, const std::string& out_path);

}  // namespace qnd::cli
