#include "qnd/spectra.hpp"

#include <cmath>
#include <string>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

void require_qubits(const DeviceParams& params, const DiagonalState& state, std::size_t n, std::string_view what) {
  if (params.n_qubits() != n || state.n_qubits() != n)
    throw InvalidInput(std::string(what) + " requires exactly " + std::to_string(n) + " qubit(s)");
}

template <typename F>
Spectrum sample(const FrequencyGrid& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.at(i).rad_per_us());
  return Spectrum(grid, std::move(v));
}

}  // namespace

std::string_view to_string(ClosedFormKind kind) {
  switch (kind) {
    case ClosedFormKind::EmptyCavity: return "empty";
    case ClosedFormKind::MeanField: return "meanfield";
    case ClosedFormKind::OneQubit: return "closed1";
    case ClosedFormKind::TwoQubit: return "closed2";
  }
  return "unknown";
}

Spectrum empty_cavity_spectrum(const DeviceParams& params, const FrequencyGrid& grid) {
  params.check();
  const double wf = params.cavity_freq.rad_per_us();
  const double k = params.cavity_decay.rad_per_us() / 2.0;
  return sample(grid, [&](double w) { return 1.0 / ((w - wf) * (w - wf) + k * k); });
}

Spectrum meanfield_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  if (state.n_qubits() != params.n_qubits()) throw InvalidInput("meanfield: state and device qubit counts differ");
  const auto rates = shift_rates(params);
  double shift = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) shift += rates[j] * expectation_z(state, SubsetMask{1} << j);
  const double center = params.cavity_freq.rad_per_us() - shift;
  const double k = params.cavity_decay.rad_per_us() / 2.0;
  return sample(grid, [&](double w) { return 1.0 / ((w - center) * (w - center) + k * k); });
}

Spectrum closed_form_n1(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  require_qubits(params, state, 1, "closed_form_n1");
  const double gamma = shift_rates(params)[0];
  const double kappa = params.cavity_decay.rad_per_us();
  const double wf = params.cavity_freq.rad_per_us();
  const double z = expectation_z(state, subset_of({1}));
  const double lambda = gamma * gamma + kappa * kappa / 4.0;
  return sample(grid, [&](double w) {
    const double y = w - wf;
    const double num = y * y - 2.0 * y * gamma * z + lambda;
    const double a = y * y - lambda;
    return num / (a * a + kappa * kappa * y * y);
  });
}

Spectrum closed_form_n2(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  require_qubits(params, state, 2, "closed_form_n2");
  const auto rates = shift_rates(params);
  const double g1 = rates[0];
  const double g2 = rates[1];
  const double kappa = params.cavity_decay.rad_per_us();
  const double wf = params.cavity_freq.rad_per_us();
  const double z1 = expectation_z(state, subset_of({1}));
  const double z2 = expectation_z(state, subset_of({2}));
  const double z12 = expectation_z(state, subset_of({1, 2}));

  const double gsum2 = g1 * g1 + g2 * g2;
  const double k2 = kappa * kappa;
  return sample(grid, [&](double w) {
    const double y = w - wf;
    const double y2 = y * y;
    const double q = k2 / 4.0 - y2;
    const double diff = g1 * g1 - g2 * g2;

    const double a = diff * diff + 2.0 * q * gsum2 + q * q - k2 * y2;
    const double b = -2.0 * kappa * y * (gsum2 + k2 / 4.0 - y2);
    const double c = kappa * z12 * g1 * g2 - kappa * y * (z1 * g1 + z2 * g2) +
                     (kappa / 2.0) * (3.0 * y2 - k2 / 4.0 - gsum2);
    const double d = -2.0 * z12 * y * g1 * g2 -
                     (z1 * g1 * (g1 * g1 - g2 * g2 + q) + z2 * g2 * (g2 * g2 - g1 * g1 + q)) +
                     y * (gsum2 + 3.0 * k2 / 4.0 - y2);
    return -2.0 * (a * c + b * d) / (kappa * (a * a + b * b));
  });
}

Spectrum closed_form_spectrum(ClosedFormKind kind, const DeviceParams& params, const DiagonalState& state,
                              const FrequencyGrid& grid) {
  switch (kind) {
    case ClosedFormKind::EmptyCavity: return empty_cavity_spectrum(params, grid);
    case ClosedFormKind::MeanField: return meanfield_spectrum(params, state, grid);
    case ClosedFormKind::OneQubit: return closed_form_n1(params, state, grid);
    case ClosedFormKind::TwoQubit: return closed_form_n2(params, state, grid);
  }
  throw InvalidInput("unknown closed form");
}

}  // namespace qnd
