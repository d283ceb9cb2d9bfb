#pragma once

// Test-only reference computations. Each is built along a different route
// from the library code it checks (explicit Kronecker products, brute-force
// enumeration, quadrature) and must not call into the path under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qnd/model.hpp"

namespace qnd::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_diff(a[i], b[i]));
  return worst;
}

/// Kronecker product of dense matrices.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// sigma_z of qubit j (1-based) on the N-qubit register, qubit 1 the rightmost
/// (least significant) Kronecker factor, diag(-1, +1) on (|0>, |1>).
inline Eigen::MatrixXcd sigma_z(std::size_t j, std::size_t n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = n; q >= 1; --q) {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(2, 2);
    if (q == j) f << -1.0, 0.0, 0.0, 1.0;
    out = kron(out, f);
  }
  return out;
}

/// Tr(diag(p) prod_{j in qubits} sigma_j^z) via explicit matrices.
inline double kron_z_expectation(std::span<const double> p, std::size_t n, const std::vector<std::size_t>& qubits) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (auto j : qubits) op = op * sigma_z(j, n);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
  return sum;
}

/// Dense stochastic matrix for independent T1 decay, built by Kronecker products.
inline Eigen::MatrixXd kron_decay_matrix(const std::vector<double>& t1, double tau) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (std::size_t q = t1.size(); q >= 1; --q) {
    const double e = std::isinf(t1[q - 1]) ? 1.0 : std::exp(-tau / t1[q - 1]);
    Eigen::MatrixXd f(2, 2);
    f << 1.0, 1.0 - e, 0.0, e;
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(i * 2, j * 2, 2, 2) = out(i, j) * f;
    out = next;
  }
  return out;
}

/// Composite Simpson rule on [0, T] divided by T (even n).
inline double simpson_mean(const std::function<double(double)>& f, double span, std::size_t n = 2000) {
  const double h = span / static_cast<double>(n);
  double sum = f(0.0) + f(span);
  for (std::size_t i = 1; i < n; ++i) sum += f(h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
  return sum * h / 3.0 / span;
}

inline double lorentzian(double w, double center, double kappa) {
  const double y = w - center;
  return 1.0 / (y * y + kappa * kappa / 4.0);
}

/// Random probability vector of length 2^n with every entry >= floor / 2^n.
inline std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> p(dim);
  double sum = 0.0;
  for (auto& x : p) sum += (x = expo(rng) + floor);
  for (auto& x : p) x /= sum;
  return p;
}

inline DiagonalState random_state(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  return DiagonalState::from_probs(random_probs(rng, n, floor));
}

/// Device with direct shifts drawn log-uniformly from [lo, hi] MHz.
inline DeviceParams random_device(std::mt19937_64& rng, std::size_t n, double kappa_mhz, double lo_mhz, double hi_mhz) {
  std::uniform_real_distribution<double> u(std::log(lo_mhz), std::log(hi_mhz));
  DeviceParams p;
  p.cavity_freq = AngularFrequency::from_mhz(6000.0);
  p.cavity_decay = AngularFrequency::from_mhz(kappa_mhz);
  for (std::size_t j = 0; j < n; ++j) p.qubits.push_back(QubitParams::from_shift(AngularFrequency::from_mhz(std::exp(u(rng)))));
  return p;
}

/// Brute-force NNLS: try every support set, keep the best feasible unconstrained LS.
inline Eigen::VectorXd nnls_enumerate(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const auto n = a.cols();
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_res = b.norm();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j)
      if ((mask >> j) & 1u) cols.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
    const Eigen::VectorXd s = sub.fullPivHouseholderQr().solve(b);
    if ((s.array() < 0.0).any()) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) x(cols[c]) = s(static_cast<Eigen::Index>(c));
    const double res = (a * x - b).norm();
    if (res < best_res) {
      best_res = res;
      best = x;
    }
  }
  return best;
}

}  // namespace qnd::testing
