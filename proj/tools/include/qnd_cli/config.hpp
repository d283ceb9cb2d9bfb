#pragma once

// JSON run configuration. Frequencies are linear MHz (or GHz) in the file and
// converted to AngularFrequency on load; every error names the offending field
// as a JSON pointer.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qnd/decay.hpp"
#include "qnd/infer.hpp"
#include "qnd/lindblad.hpp"
#include "qnd/model.hpp"

namespace qnd::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::size_t kDefaultGridPoints = 2001;

struct GridSettings {
  std::optional<double> center_mhz;
  std::optional<double> half_span_mhz;
  std::size_t points = kDefaultGridPoints;
};

struct DecaySettings {
  std::vector<double> times_us;  // empty: 0, 0.1, ..., 3 us
  double tau_us = 0.5;           // quasi-static spectrum
  double tau_max_us = 0.5;       // time average window
  std::size_t n_steps = 64;
  Averaging averaging = Averaging::Analytic;
};

struct OutputPaths {
  std::optional<std::string> csv;
  std::optional<std::string> populations_csv;
  std::optional<std::string> json;
};

struct RunConfig {
  std::optional<DeviceParams> device;
  std::optional<std::vector<double>> probs;
  GridSettings grid;
  TruncationConfig oracle;
  DecaySettings decay;
  double prominence = kDefaultProminence;
  double noise_relative_sigma = 0.0;  // Gaussian noise on spectrum output, fraction of max S
  std::uint64_t seed = 0;
  OutputPaths output;

  const DeviceParams& require_device() const;
  DiagonalState require_state() const;
};

/// `source` prefixes error messages (usually the file name).
RunConfig parse_config(const nlohmann::json& doc, std::string_view source = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Installs a named device preset; rejects a config that already has a device block.
void apply_preset(RunConfig& config, std::string_view name);

/// Centered on omega_f (or center_MHz), half span sum Gamma + 10 kappa (or half_span_MHz).
FrequencyGrid make_grid(const RunConfig& config);

std::vector<double> decay_times(const RunConfig& config);

/// FNV-1a 64 of every resolved setting that affects numeric output, as 16 hex digits.
std::string params_hash(const RunConfig& config);

/// |b_1 b_2 ... b_N>, qubit 1 written first.
std::string ket_label(std::size_t k, std::size_t n_qubits);

}  // namespace qnd::cli
