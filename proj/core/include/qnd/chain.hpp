#pragma once

// Exact steady-state transmission from the closed correlation chain.
//
// The moments <P_S a>, P_S = prod_{j in S} sigma_j^z, obey
//
//   d<P_S a>/dt = (-i delta - kappa/2) <P_S a> + i sum_l Gamma_l <P_{S xor {l}} a> - i eps <P_S>,
//
// because sigma_l^z P_S = P_{S xor {l}} ((sigma^z)^2 = 1). The 2^N moments
// form a closed linear system; its steady state gives <a> and from it
// S = <a^dag a>/eps^2 = -2 Im<a>/(kappa eps).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qnd/model.hpp"

namespace qnd {

/// Steady-state <(prod_{j in S} sigma_j^z) a>, indexed by subset bitmask.
struct CorrelatorVector {
  std::size_t n_qubits = 0;
  Eigen::VectorXcd entries;

  std::complex<double> entry(SubsetMask subset) const { return entries(static_cast<Eigen::Index>(subset)); }
  std::complex<double> field() const { return entries(0); }
};

inline constexpr double kChainResidualTolerance = 1e-10;

/// Chain matrix M: M[S,S] = -i(omega_f - omega_L) - kappa/2, M[S, S xor {l}] += i Gamma_l.
Eigen::MatrixXcd build_chain_matrix(const DeviceParams& params, AngularFrequency probe);

/// Dense LU solve of M v = i eps z with z(S) = expectation_z(state, S).
CorrelatorVector steady_correlators(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe);

/// Same correlators via the parity (Walsh-Hadamard) eigenbasis of M, O(N 2^N).
CorrelatorVector fast_correlators(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe);

/// Dense chain solve at every grid point.
Spectrum exact_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// Sum_k p_k / ((omega_L - center_k)^2 + (kappa/2)^2), the real Lorentzian form.
Spectrum mixture_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// O(2^N) per point: resolvent of the diagonalized chain, 1/lambda_k summed with weights p_k.
Spectrum fast_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid);

/// Eigenvalues of M in basis order: -i delta - kappa/2 + i sum_j Gamma_j s_j(k).
std::vector<std::complex<double>> chain_eigenvalues(const DeviceParams& params, AngularFrequency probe);

/// Window covering every possible peak: omega_f +/- (sum_j Gamma_j + 10 kappa).
FrequencyGrid default_window(const DeviceParams& params, std::size_t count);

/// In-place unnormalized Walsh-Hadamard transform, out[S] = sum_k (-1)^{popcount(S & k)} in[k].
template <typename T>
void walsh_hadamard(std::span<T> values) {
  const std::size_t n = values.size();
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const T a = values[i];
        const T b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
}

}  // namespace qnd
