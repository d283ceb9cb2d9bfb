#pragma once

// Readout: recover which basis states are present, and with what weights,
// from a measured transmission spectrum and calibrated device parameters.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qnd/model.hpp"

namespace qnd {

struct CenterTable {
  std::vector<AngularFrequency> centers;         // one per basis index
  std::vector<std::vector<std::size_t>> groups;  // basis indices sharing a center, ascending; covers all indices

  std::vector<std::vector<std::size_t>> degenerate_groups() const;
  std::size_t group_of(std::size_t basis_index) const;
};

/// Centers closer than this fraction of kappa are reported as one group.
inline constexpr double kDegeneracyFraction = 0.01;

CenterTable predicted_centers(const DeviceParams& params);

struct Peak {
  AngularFrequency location;
  double height = 0.0;
  std::optional<std::size_t> basis_index;  // set when the nearest center is not degenerate
  std::optional<std::size_t> group;        // index into PeakReport::groups
};

struct PeakReport {
  std::vector<Peak> peaks;
  double residual = 0.0;  // largest |location - assigned center|, rad/us
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<std::size_t>> degenerate_groups;
};

inline constexpr double kDefaultProminence = 0.02;

/// Local maxima whose topographic prominence is at least `prominence` times
/// the global maximum; locations and heights refined by a parabola through
/// the three samples around each maximum.
std::vector<Peak> find_peaks(const Spectrum& spectrum, double prominence = kDefaultProminence);
std::vector<Peak> find_peaks(const FrequencyGrid& grid, std::span<const double> samples,
                             double prominence = kDefaultProminence);

/// Matches peaks to predicted centers (within max(step, kappa/2)); each center is used once.
PeakReport assign_peaks(std::vector<Peak> peaks, const DeviceParams& params, const FrequencyGrid& grid);

struct WeightEstimate {
  std::vector<std::vector<std::size_t>> groups;  // basis indices per weight; singletons when resolvable
  std::vector<double> probs;                     // one per group, >= 0, sums to 1
  double residual_norm = 0.0;                    // ||fit - data|| / ||data||
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool unresolvable = false;                     // some group merges several basis states

  /// Per-basis-index weights; throws InvalidInput when a group is degenerate.
  std::vector<double> basis_probs() const;
};

inline constexpr double kNnlsTolerance = 1e-10;

/// Nonnegative least-squares fit of the samples to the dictionary
/// { [(omega_L - center)^2 + (kappa/2)^2]^-1 } over center groups, normalized to sum 1.
/// Requires the grid to span every center and to sample kappa at least 3 times.
WeightEstimate infer_weights(const Spectrum& spectrum, const DeviceParams& params);
WeightEstimate infer_weights(const FrequencyGrid& grid, std::span<const double> samples, const DeviceParams& params);

/// Diagnostic: S(center_k) (kappa/2)^2, normalized. Only meaningful for well separated peaks.
std::vector<double> height_reading_weights(const Spectrum& spectrum, const DeviceParams& params);

}  // namespace qnd
