#pragma once

// Closed-form transmission spectra used as analytic cross-checks.

#include <string_view>

#include "qnd/model.hpp"

namespace qnd {

enum class ClosedFormKind { EmptyCavity, MeanField, OneQubit, TwoQubit };

std::string_view to_string(ClosedFormKind kind);

/// [(omega_L - omega_f)^2 + (kappa/2)^2]^-1, ignoring any qubits.
Spectrum empty_cavity_spectrum(const DeviceParams& params, const FrequencyGrid& grid);

/// Mean-field (factorized <sigma_z a> ~ <sigma_z><a>) spectrum: one Lorentzian
/// centered at omega_f - sum_j Gamma_j <sigma_j^z>.
Spectrum meanfield_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// N = 1 closed form,
///
///   S_1 = (y^2 - 2 y Gamma Z + Lambda) / ((y^2 - Lambda)^2 + (kappa y)^2),
///
/// y = omega_L - omega_f, Lambda = Gamma^2 + (kappa/2)^2, Z = <sigma^z>.
/// The denominator is the product of the two pulled Lorentzian denominators,
/// ((y - Gamma)^2 + k^2)((y + Gamma)^2 + k^2) = (y^2 - Lambda)^2 + (kappa y)^2
/// with k = kappa/2, so S_1 = p_0 L(omega_f + Gamma) + p_1 L(omega_f - Gamma).
Spectrum closed_form_n1(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// N = 2 closed form S_2 = -2(AC + BD) / (kappa (A^2 + B^2)) with the
/// coefficients A, B, C, D evaluated term by term (j' is the other qubit).
Spectrum closed_form_n2(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// Dispatch on kind; EmptyCavity ignores the state.
Spectrum closed_form_spectrum(ClosedFormKind kind, const DeviceParams& params, const DiagonalState& state,
                              const FrequencyGrid& grid);

}  // namespace qnd
