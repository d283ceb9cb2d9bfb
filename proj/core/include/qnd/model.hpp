#pragma once

// Domain types for N qubits dispersively coupled to one driven, lossy cavity.
//
// Conventions used throughout the library:
//   * frequencies and rates are AngularFrequency (rad/us), times are in us;
//   * basis index k has qubit j (1-based) on bit j-1, so qubit 1 is the LSB;
//   * sigma_z has eigenvalue +1 on |1> and -1 on |0>;
//   * a subset of qubits is a bitmask over the same bit positions.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnd/units.hpp"

namespace qnd {

inline constexpr std::size_t kDefaultMaxQubits = 12;

struct QubitParams {
  // Inputs: either (transition_freq, coupling) or direct_shift.
  std::optional<AngularFrequency> transition_freq;
  std::optional<AngularFrequency> coupling;
  std::optional<AngularFrequency> direct_shift;
  std::optional<double> t1_us;  // absent: module default; +inf: no decay

  // Filled by derive_dispersive_shifts().
  std::optional<AngularFrequency> dispersive_shift;
  std::optional<AngularFrequency> renormalized_freq;

  static QubitParams from_coupling(AngularFrequency omega, AngularFrequency g,
                                   std::optional<double> t1_us = std::nullopt);
  static QubitParams from_shift(AngularFrequency shift, std::optional<double> t1_us = std::nullopt);
};

struct DeviceParams {
  AngularFrequency cavity_freq;
  AngularFrequency cavity_decay;
  std::optional<AngularFrequency> drive;  // defaults to kappa/20
  std::vector<QubitParams> qubits;
  std::size_t max_qubits = kDefaultMaxQubits;

  std::size_t n_qubits() const { return qubits.size(); }
  std::size_t dimension() const { return std::size_t{1} << qubits.size(); }
  AngularFrequency drive_amplitude() const { return drive.value_or(cavity_decay / 20.0); }
  bool shifts_derived() const;

  /// Throws InvalidInput unless kappa > 0, all values finite, N within the cap.
  void check() const;
};

/// Fills dispersive_shift (g^2/|omega_f - omega_j|, or the direct value) and
/// renormalized_freq (omega_j - Gamma_j) for every qubit. Idempotent.
DeviceParams derive_dispersive_shifts(DeviceParams params);

/// Gamma_j in rad/us, deriving them first when needed.
std::vector<double> shift_rates(const DeviceParams& params);

struct RatioCheck {
  std::string label;
  std::size_t i = 0;  // 1-based
  std::size_t j = 0;  // 1-based, 0 for single-qubit checks
  double value = 0.0;
  bool passed = false;
};

struct DecayCheck {
  std::size_t qubit = 0;
  double gamma_over_kappa = 0.0;
  bool warn = false;
};

struct DispersiveReport {
  double threshold = 0.1;
  std::vector<RatioCheck> ratios;
  std::vector<DecayCheck> decay;
  std::vector<std::string> notes;

  bool passed() const;
};

inline constexpr double kDecayWarnRatio = 0.5;

/// Checks the dispersive-regime ratios g_j/Delta_j, g_i g_j/(Delta_i Delta_ij)
/// and g_i g_j/(Delta_j Delta_ij) against `threshold`, plus 1/T1 << kappa.
/// Qubits configured by a direct shift only get a Gamma_j > 0 check.
DispersiveReport validate_dispersive(const DeviceParams& params, double threshold = 0.1);

/// +1 if qubit j (1-based) is |1> in basis state k, -1 otherwise.
int basis_sign(std::size_t k, std::size_t j, std::size_t n_qubits);

using SubsetMask = std::uint32_t;

/// Bitmask for a set of 1-based qubit indices.
SubsetMask subset_of(std::initializer_list<std::size_t> qubits);

class DiagonalState {
public:
  inline static constexpr double kSumTolerance = 1e-12;

  /// Validates: length 2^N, entries in [0, 1], sum 1 within kSumTolerance.
  static DiagonalState from_probs(std::vector<double> probs);
  static DiagonalState basis(std::size_t n_qubits, std::size_t k);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t k) const { return probs_[k]; }

  /// State with every qubit flipped: p'_k = p_{~k}.
  DiagonalState bit_complement() const;

  bool is_basis_state() const;

private:
  DiagonalState(std::size_t n, std::vector<double> p) : n_qubits_(n), probs_(std::move(p)) {}

  std::size_t n_qubits_ = 0;
  std::vector<double> probs_;
};

/// <prod_{j in subset} sigma_j^z> = sum_k p_k prod_j basis_sign(k, j).
double expectation_z(const DiagonalState& state, SubsetMask subset);

/// Cavity resonance pulled by basis state k: omega_f - sum_j Gamma_j s_j(k).
std::vector<AngularFrequency> pulled_centers(const DeviceParams& params);

class FrequencyGrid {
public:
  FrequencyGrid(AngularFrequency start, AngularFrequency stop, std::size_t count);

  static FrequencyGrid centered(AngularFrequency center, AngularFrequency half_span, std::size_t count);

  AngularFrequency start() const { return start_; }
  AngularFrequency stop() const { return stop_; }
  std::size_t size() const { return count_; }
  AngularFrequency step() const { return (stop_ - start_) / static_cast<double>(count_ - 1); }
  AngularFrequency at(std::size_t i) const;

private:
  AngularFrequency start_;
  AngularFrequency stop_;
  std::size_t count_;
};

/// Transmission S(omega_L) = <a^dag a>/eps^2 sampled on a grid; units 1/(rad/us)^2.
class Spectrum {
public:
  /// Throws InvalidInput on a size mismatch or a negative/non-finite value.
  Spectrum(FrequencyGrid grid, std::vector<double> values);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  Spectrum scaled(double factor) const;

private:
  FrequencyGrid grid_;
  std::vector<double> values_;
};

}  // namespace qnd
