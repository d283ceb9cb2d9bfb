#pragma once

// Qubit T1 relaxation of the detected register and the resulting
// quasi-static and time-averaged transmission spectra.
//
// Each qubit relaxes independently: |1> -> |0> with probability 1 - exp(-tau/T1).
// The cavity is assumed to track the populations adiabatically (kappa >> 1/T1),
// so the spectrum at time tau is the steady-state spectrum of the decayed
// populations.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qnd/model.hpp"

namespace qnd {

inline constexpr double kDefaultT1Us = 1.0;

/// Per-qubit T1 in us, kDefaultT1Us where the device leaves it unset.
std::vector<double> t1_times(const DeviceParams& params);

/// Applies the tensor product of [[1, 1 - e_j], [0, e_j]], e_j = exp(-tau/T1_j).
/// T1 = +inf leaves that qubit untouched.
DiagonalState decay_populations(const DiagonalState& initial, std::span<const double> t1_us, double tau_us);

struct DecayTrajectory {
  std::vector<double> times_us;
  std::vector<DiagonalState> states;
};

DecayTrajectory decay_trajectory(const DiagonalState& initial, std::span<const double> t1_us,
                                 std::span<const double> times_us);

/// Human-readable warnings when kappa is not much larger than 1/T1.
std::vector<std::string> timescale_warnings(const DeviceParams& params);

/// exact_spectrum of the populations decayed for tau_us with the device T1s.
Spectrum quasi_static_spectrum(const DeviceParams& params, const DiagonalState& initial, double tau_us,
                               const FrequencyGrid& grid);

enum class Averaging { Analytic, Trapezoid };

/// Uniform time average of the decayed populations over [0, tau_max].
///
/// Analytic: every population is a combination of exp(-t sum_{j in A} 1/T1_j)
/// over subsets A of qubits, each averaged in closed form. Trapezoid: n_steps
/// intervals on the populations.
DiagonalState time_averaged_populations(const DiagonalState& initial, std::span<const double> t1_us,
                                        double tau_max_us, Averaging method = Averaging::Analytic,
                                        std::size_t n_steps = 64);

/// Spectrum is linear in the populations, so the time-averaged spectrum is the
/// spectrum of the time-averaged populations: one evaluation.
Spectrum time_averaged_spectrum(const DeviceParams& params, const DiagonalState& initial, double tau_max_us,
                                std::size_t n_steps, const FrequencyGrid& grid,
                                Averaging method = Averaging::Analytic);

}  // namespace qnd
