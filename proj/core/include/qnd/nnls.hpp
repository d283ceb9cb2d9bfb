#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace qnd {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;  // ||A x - b||
  double kkt_residual = 0.0;   // max violation of the KKT conditions
  std::size_t iterations = 0;
  bool converged = false;
};

/// min ||A x - b|| subject to x >= 0 (Lawson-Hanson active set).
/// Entering variables are chosen by largest gradient, ties to the lowest
/// index, so the result is deterministic. Stops when every gradient entry
/// on the active (zero) set is <= tol, or after max_iterations outer steps
/// (0 selects 3 * columns).
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol = 1e-10,
                std::size_t max_iterations = 0);

}  // namespace qnd
