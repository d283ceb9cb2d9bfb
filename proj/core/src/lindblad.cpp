#include "qnd/lindblad.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

struct MarchResult {
  Eigen::MatrixXcd rho;
  double photon_number = 0.0;
  double elapsed_us = 0.0;
  std::size_t steps = 0;
  double last_relative_change = 0.0;
  bool converged = false;
};

double photon_number_of(const Eigen::MatrixXcd& rho, std::size_t n_qubits) {
  const std::size_t dq = std::size_t{1} << n_qubits;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) sum += static_cast<double>(static_cast<std::size_t>(i) / dq) * rho(i, i).real();
  return sum;
}

double step_bound(const LindbladGenerator& gen) { return kStepSafety / gen.rate_estimate(); }

void check_truncation(const TruncationConfig& trunc) {
  if (trunc.n_max < 2) throw InvalidInput("truncation: n_max must be >= 2");
  if (!(trunc.convergence_tol > 0.0)) throw InvalidInput("truncation: convergence_tol must be > 0");
  if (trunc.time_step_us < 0.0 || trunc.max_time_us < 0.0) throw InvalidInput("truncation: times must be >= 0");
  if (trunc.invariant_check_interval == 0) throw InvalidInput("truncation: invariant_check_interval must be >= 1");
}

MarchResult march(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe,
                  const TruncationConfig& trunc) {
  check_truncation(trunc);
  if (state.n_qubits() != params.n_qubits()) throw InvalidInput("oracle: state and device qubit counts differ");
  const auto gen = build_generator(params, probe, trunc);
  const double kappa = params.cavity_decay.rad_per_us();

  const double bound = step_bound(gen);
  if (trunc.time_step_us > bound) {
    std::ostringstream os;
    os << "truncation: time_step " << trunc.time_step_us << " us exceeds the stability bound " << bound << " us";
    throw InvalidInput(os.str());
  }
  const double dt = trunc.time_step_us > 0.0 ? trunc.time_step_us : bound;
  const double max_time = trunc.max_time_us > 0.0 ? trunc.max_time_us : 400.0 / kappa;
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((1.0 / kappa) / dt)));
  const auto max_steps = static_cast<std::size_t>(std::ceil(max_time / dt));

  MarchResult out;
  out.rho = DensityOperator::vacuum_product(state, trunc.n_max).matrix();
  out.photon_number = 0.0;

  if (gen(out.rho).cwiseAbs().maxCoeff() == 0.0) {
    out.converged = true;
    return out;
  }

  const auto nq = params.n_qubits();
  double previous = photon_number_of(out.rho, nq);
  int quiet_windows = 0;
  out.last_relative_change = std::numeric_limits<double>::infinity();

  Eigen::MatrixXcd k1, k2, k3, k4;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    const auto& rho = out.rho;
    k1 = gen(rho);
    k2 = gen(rho + (0.5 * dt) * k1);
    k3 = gen(rho + (0.5 * dt) * k2);
    k4 = gen(rho + dt * k3);
    out.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.steps = step;
    out.elapsed_us = static_cast<double>(step) * dt;

    if (step % trunc.invariant_check_interval == 0) {
      try {
        DensityOperator(out.rho, trunc.n_max, nq).check_invariants();
      } catch (const NumericalFailure& e) {
        std::ostringstream os;
        os << "step-size failure at t = " << out.elapsed_us << " us: " << e.what();
        throw NumericalFailure(os.str());
      }
    }

    if (step % window == 0) {
      const double current = photon_number_of(out.rho, nq);
      const double scale = std::max(std::abs(current), std::numeric_limits<double>::min());
      out.last_relative_change = (current == previous) ? 0.0 : std::abs(current - previous) / scale;
      previous = current;
      quiet_windows = out.last_relative_change < trunc.convergence_tol ? quiet_windows + 1 : 0;
      if (quiet_windows >= 2) {
        out.converged = true;
        break;
      }
    }
  }
  out.photon_number = photon_number_of(out.rho, nq);
  return out;
}

}  // namespace

DensityOperator::DensityOperator(Eigen::MatrixXcd rho, std::size_t n_max, std::size_t n_qubits)
    : rho_(std::move(rho)), n_max_(n_max), n_qubits_(n_qubits) {
  const auto dim = static_cast<Eigen::Index>((n_max + 1) << n_qubits);
  if (rho_.rows() != dim || rho_.cols() != dim) throw InvalidInput("density operator: dimension mismatch");
}

DensityOperator DensityOperator::vacuum_product(const DiagonalState& state, std::size_t n_max) {
  const auto dq = static_cast<Eigen::Index>(state.dimension());
  const auto dim = static_cast<Eigen::Index>(n_max + 1) * dq;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dq; ++k) rho(k, k) = state[static_cast<std::size_t>(k)];
  return DensityOperator(std::move(rho), n_max, state.n_qubits());
}

double DensityOperator::photon_number() const { return photon_number_of(rho_, n_qubits_); }

double DensityOperator::fock_occupation(std::size_t n) const {
  if (n > n_max_) throw InvalidInput("fock_occupation: photon number beyond truncation");
  const std::size_t dq = std::size_t{1} << n_qubits_;
  double sum = 0.0;
  for (std::size_t k = 0; k < dq; ++k) {
    const auto i = static_cast<Eigen::Index>(n * dq + k);
    sum += rho_(i, i).real();
  }
  return sum;
}

double DensityOperator::expectation_z(SubsetMask subset) const {
  const std::size_t dq = std::size_t{1} << n_qubits_;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
    const auto k = static_cast<SubsetMask>(static_cast<std::size_t>(i) % dq);
    const int zeros = std::popcount(static_cast<SubsetMask>(subset & ~k));
    sum += (zeros & 1) ? -rho_(i, i).real() : rho_(i, i).real();
  }
  return sum;
}

double DensityOperator::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityOperator::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityOperator::check_invariants() const {
  std::ostringstream os;
  if (const double h = hermiticity_error(); h > kHermiticityTol) {
    os << "density operator not Hermitian (max deviation " << h << ")";
    throw NumericalFailure(os.str());
  }
  if (const double t = std::abs(trace() - 1.0); t > kTraceTol) {
    os << "density operator trace deviates from 1 by " << t;
    throw NumericalFailure(os.str());
  }
  // Cholesky of rho + tol I succeeds iff no eigenvalue lies below -tol; the
  // eigenvalue itself is only computed for the message.
  Eigen::MatrixXcd shifted = 0.5 * (rho_ + rho_.adjoint());
  shifted.diagonal().array() += kPositivityTol;
  if (Eigen::LLT<Eigen::MatrixXcd>(shifted).info() != Eigen::Success) {
    os << "density operator has negative eigenvalue " << min_eigenvalue();
    throw NumericalFailure(os.str());
  }
}

LindbladGenerator::LindbladGenerator(const DeviceParams& params, AngularFrequency probe, std::size_t n_max,
                                     AngularFrequency drive)
    : n_max_(n_max), n_qubits_(params.n_qubits()) {
  if (n_max < 2) throw InvalidInput("truncation: n_max must be >= 2");
  const DeviceParams dev = derive_dispersive_shifts(params);
  const std::size_t dq = dev.dimension();
  dim_ = (n_max + 1) * dq;
  kappa_ = dev.cavity_decay.rad_per_us();
  const double delta = (dev.cavity_freq - probe).rad_per_us();
  const double eps = drive.rad_per_us();

  std::vector<double> gamma(n_qubits_);
  std::vector<double> renorm(n_qubits_, 0.0);
  double gamma_max = 0.0;
  for (std::size_t j = 0; j < n_qubits_; ++j) {
    gamma[j] = dev.qubits[j].dispersive_shift->rad_per_us();
    gamma_max = std::max(gamma_max, gamma[j]);
    // Qubits given by a direct shift have no known frequency; the term commutes with everything anyway.
    if (dev.qubits[j].renormalized_freq) renorm[j] = dev.qubits[j].renormalized_freq->rad_per_us();
  }
  rate_estimate_ = std::abs(delta) + static_cast<double>(n_qubits_) * gamma_max + kappa_;

  auto idx = [dq](std::size_t n, std::size_t k) { return static_cast<Eigen::Index>(n * dq + k); };
  std::vector<Eigen::Triplet<cd>> a_entries;
  std::vector<Eigen::Triplet<cd>> h_entries;
  qubit_energy_.resize(static_cast<Eigen::Index>(dim_));
  photon_count_.resize(static_cast<Eigen::Index>(dim_));

  for (std::size_t k = 0; k < dq; ++k) {
    double pull = 0.0;
    double energy = 0.0;
    for (std::size_t j = 0; j < n_qubits_; ++j) {
      const double s = ((k >> j) & 1u) ? 1.0 : -1.0;
      pull += gamma[j] * s;
      energy += 0.5 * renorm[j] * s;
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double nn = static_cast<double>(n);
      qubit_energy_(idx(n, k)) = energy;
      photon_count_(idx(n, k)) = nn;
      h_entries.emplace_back(idx(n, k), idx(n, k), cd(delta * nn - nn * pull, 0.0));
      if (n > 0) {
        const double amp = std::sqrt(nn);
        a_entries.emplace_back(idx(n - 1, k), idx(n, k), cd(amp, 0.0));
        h_entries.emplace_back(idx(n - 1, k), idx(n, k), cd(eps * amp, 0.0));
        h_entries.emplace_back(idx(n, k), idx(n - 1, k), cd(eps * amp, 0.0));
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  a_.resize(d, d);
  a_.setFromTriplets(a_entries.begin(), a_entries.end());
  h_coupled_.resize(d, d);
  h_coupled_.setFromTriplets(h_entries.begin(), h_entries.end());

  eps_ = eps;
  ladder_.resize(d - static_cast<Eigen::Index>(dq));
  for (Eigen::Index r = 0; r < ladder_.size(); ++r) ladder_(r) = std::sqrt(photon_count_(r) + 1.0);
  jump_weight_ = kappa_ * ladder_ * ladder_.transpose();
  const Eigen::VectorXd h_diag = Eigen::MatrixXcd(h_coupled_).diagonal().real();
  elementwise_.resize(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) {
      // Equal-k entries cancel the qubit energy exactly.
      const double phase = (h_diag(r) - h_diag(c)) + (qubit_energy_(r) - qubit_energy_(c));
      elementwise_(r, c) = -kI * phase - 0.5 * kappa_ * (photon_count_(r) + photon_count_(c));
    }
}

Eigen::MatrixXcd LindbladGenerator::operator()(const Eigen::MatrixXcd& rho) const {
  // Diagonal Hamiltonian parts and the anticommutator are one elementwise factor;
  // a moves a row/column block of size 2^N by one photon.
  const auto d = static_cast<Eigen::Index>(dim_);
  const auto dq = d - static_cast<Eigen::Index>(ladder_.size());
  const auto m = d - dq;
  const auto up = ladder_.asDiagonal();
  const cd drive = -kI * eps_;

  Eigen::MatrixXcd out = elementwise_.cwiseProduct(rho);
  // -i eps [a + a^dag, rho]
  out.topRows(m).noalias() += drive * (up * rho.bottomRows(m));
  out.bottomRows(m).noalias() += drive * (up * rho.topRows(m));
  out.rightCols(m).noalias() -= drive * (rho.leftCols(m) * up);
  out.leftCols(m).noalias() -= drive * (rho.rightCols(m) * up);
  // kappa a rho a^dag
  out.topLeftCorner(m, m) += jump_weight_.cwiseProduct(rho.bottomRightCorner(m, m));
  return out;
}

Eigen::MatrixXcd LindbladGenerator::hamiltonian() const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd(h_coupled_);
  h.diagonal() += qubit_energy_.cast<cd>();
  return h;
}

LindbladGenerator build_generator(const DeviceParams& params, AngularFrequency probe, const TruncationConfig& trunc) {
  check_truncation(trunc);
  return LindbladGenerator(params, probe, trunc.n_max, trunc.drive.value_or(params.drive_amplitude()));
}

SteadyStateResult evolve_to_steady(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe,
                                   const TruncationConfig& trunc) {
  auto m = march(params, state, probe, trunc);
  if (!m.converged) {
    std::ostringstream os;
    os << "no steady state within " << m.elapsed_us << " us at omega_L = " << probe.mhz()
       << " MHz (last relative change " << m.last_relative_change << ")";
    throw ConvergenceFailure(os.str(), m.last_relative_change);
  }
  DensityOperator rho(std::move(m.rho), trunc.n_max, params.n_qubits());
  rho.check_invariants();
  const auto gen = build_generator(params, probe, trunc);
  const double stationarity = gen(rho.matrix()).cwiseAbs().maxCoeff();
  return SteadyStateResult{std::move(rho), m.photon_number, m.elapsed_us, m.steps, m.last_relative_change,
                           stationarity};
}

bool OracleSpectrum::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const OraclePoint& p) { return p.converged; });
}

void OracleSpectrum::require_converged() const {
  for (const auto& p : points) {
    if (!p.converged) {
      std::ostringstream os;
      os << "oracle point omega_L = " << p.probe.mhz() << " MHz failed: " << p.failure;
      throw ConvergenceFailure(os.str(), std::numeric_limits<double>::quiet_NaN());
    }
  }
}

Spectrum OracleSpectrum::spectrum() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.value);
  return Spectrum(grid, std::move(v));
}

OracleSpectrum oracle_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid,
                               const TruncationConfig& trunc) {
  check_truncation(trunc);
  const double eps = trunc.drive.value_or(params.drive_amplitude()).rad_per_us();
  OracleSpectrum out{grid, {}};
  out.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    OraclePoint pt;
    pt.probe = grid.at(i);
    try {
      auto m = march(params, state, pt.probe, trunc);
      const DensityOperator rho(std::move(m.rho), trunc.n_max, params.n_qubits());
      pt.value = eps > 0.0 ? std::max(0.0, m.photon_number) / (eps * eps) : 0.0;
      pt.converged = m.converged;
      pt.tail_occupation = rho.fock_occupation(trunc.n_max);
      pt.tail_flagged = pt.tail_occupation >= kTailFlagThreshold;
      pt.steps = m.steps;
      pt.elapsed_us = m.elapsed_us;
      if (!m.converged) {
        std::ostringstream os;
        os << "not stationary after " << m.elapsed_us << " us (last relative change " << m.last_relative_change << ")";
        pt.failure = os.str();
      }
    } catch (const NumericalFailure& e) {
      pt.converged = false;
      pt.failure = e.what();
    }
    out.points.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qnd
