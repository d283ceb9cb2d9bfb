#pragma once

// Brute-force oracle: the full master equation
//
//   drho/dt = -i[H, rho] + (kappa/2)(2 a rho a^dag - a^dag a rho - rho a^dag a),
//   H = delta a^dag a + 1/2 sum_j w~_j sigma_j^z - a^dag a sum_j Gamma_j sigma_j^z + eps (a^dag + a),
//
// on a truncated Fock space (photons 0..n_max) tensored with the qubits,
// integrated by fixed-step RK4 until <a^dag a> is stationary.
//
// Composite index: (n, k) -> n * 2^N + k, n the photon number, k the qubit basis index.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qnd/model.hpp"

namespace qnd {

struct TruncationConfig {
  std::size_t n_max = 8;
  std::optional<AngularFrequency> drive;  // falls back to DeviceParams::drive_amplitude()
  double time_step_us = 0.0;              // 0: largest step allowed by the bound
  double convergence_tol = 1e-9;          // relative change of <n> over one 1/kappa window
  double max_time_us = 0.0;               // 0: 400/kappa
  std::size_t invariant_check_interval = 1;
};

inline constexpr double kStepSafety = 0.05;
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kPositivityTol = 1e-8;
inline constexpr double kTailFlagThreshold = 1e-6;

class DensityOperator {
public:
  DensityOperator(Eigen::MatrixXcd rho, std::size_t n_max, std::size_t n_qubits);

  /// vacuum (x) diag(state.probs)
  static DensityOperator vacuum_product(const DiagonalState& state, std::size_t n_max);

  const Eigen::MatrixXcd& matrix() const { return rho_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t n_qubits() const { return n_qubits_; }

  std::complex<double> trace() const { return rho_.trace(); }
  double photon_number() const;
  double fock_occupation(std::size_t n) const;
  double expectation_z(SubsetMask subset) const;
  double min_eigenvalue() const;
  double hermiticity_error() const;

  /// Throws NumericalFailure naming the violated invariant.
  void check_invariants() const;

private:
  Eigen::MatrixXcd rho_;
  std::size_t n_max_;
  std::size_t n_qubits_;
};

/// rho -> drho/dt for fixed device, probe frequency and truncation.
class LindbladGenerator {
public:
  using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;

  LindbladGenerator(const DeviceParams& params, AngularFrequency probe, std::size_t n_max, AngularFrequency drive);

  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& rho) const;

  std::size_t dimension() const { return dim_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t n_qubits() const { return n_qubits_; }

  /// Full H_N, including the qubit free-evolution term.
  Eigen::MatrixXcd hamiltonian() const;
  const SparseMatrix& annihilation() const { return a_; }

  /// delta_max + N Gamma_max + kappa, the rate used for the step bound.
  double rate_estimate() const { return rate_estimate_; }

private:
  std::size_t n_max_;
  std::size_t n_qubits_;
  std::size_t dim_;
  double kappa_;
  double rate_estimate_;
  SparseMatrix a_;
  SparseMatrix h_coupled_;         // delta n - n sum Gamma sigma_z + eps (a + a^dag)
  Eigen::VectorXd qubit_energy_;   // 1/2 sum w~_j s_j(k) per composite index
  Eigen::VectorXd photon_count_;   // n per composite index
  double eps_ = 0.0;
  Eigen::VectorXd ladder_;         // sqrt(n + 1) for rows below the top photon level
  Eigen::MatrixXd jump_weight_;    // kappa sqrt((n_r + 1)(n_c + 1))
  Eigen::MatrixXcd elementwise_;   // -i(h_r - h_c) - kappa/2 (n_r + n_c), diagonal h only
};

LindbladGenerator build_generator(const DeviceParams& params, AngularFrequency probe, const TruncationConfig& trunc);

struct SteadyStateResult {
  DensityOperator rho;
  double photon_number = 0.0;
  double elapsed_us = 0.0;
  std::size_t steps = 0;
  double last_relative_change = 0.0;
  double stationarity = 0.0;  // max |L(rho)| at the final state
};

/// Integrates from vacuum (x) diag(p) with RK4. Throws ConvergenceFailure if
/// <n> is not stationary by max_time, NumericalFailure on a positivity loss.
SteadyStateResult evolve_to_steady(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe,
                                   const TruncationConfig& trunc = {});

struct OraclePoint {
  AngularFrequency probe;
  double value = 0.0;  // <n>/eps^2, 0 when eps = 0
  bool converged = false;
  double tail_occupation = 0.0;
  bool tail_flagged = false;
  std::size_t steps = 0;
  double elapsed_us = 0.0;
  std::string failure;
};

struct OracleSpectrum {
  FrequencyGrid grid;
  std::vector<OraclePoint> points;

  bool all_converged() const;
  /// Throws ConvergenceFailure naming the first failed probe frequency.
  void require_converged() const;
  Spectrum spectrum() const;
};

OracleSpectrum oracle_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid,
                               const TruncationConfig& trunc = {});

}  // namespace qnd
