#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qnd/model.hpp"

namespace qnd {

/// Single transmon-style qubit: (omega_f, omega_q, kappa, g) = 2pi x (6444.2, 4009, 1.69, 134) MHz.
DeviceParams preset_n1_2010();

/// Two qubits with direct shifts: (omega_f, Gamma_1, Gamma_2, kappa) = 2pi x (6806, 13, 4, 1) MHz, T1 = 1 us.
DeviceParams preset_n2_2010();

/// Lookup by name ("n1-2010", "n2-2010").
std::optional<DeviceParams> preset(std::string_view name);
std::vector<std::string_view> preset_names();

}  // namespace qnd
