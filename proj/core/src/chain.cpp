#include "qnd/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void require_matching(const DeviceParams& params, const DiagonalState& state) {
  if (state.n_qubits() != params.n_qubits()) {
    std::ostringstream os;
    os << "state has " << state.n_qubits() << " qubits but the device has " << params.n_qubits();
    throw InvalidInput(os.str());
  }
}

Eigen::VectorXcd subset_expectations(const DiagonalState& state) {
  Eigen::VectorXcd z(static_cast<Eigen::Index>(state.dimension()));
  for (std::size_t s = 0; s < state.dimension(); ++s) z(static_cast<Eigen::Index>(s)) = expectation_z(state, static_cast<SubsetMask>(s));
  return z;
}

Eigen::VectorXcd solve_chain(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& z, double drive) {
  const Eigen::VectorXcd rhs = (kI * drive) * z;
  const Eigen::VectorXcd v = m.partialPivLu().solve(rhs);
  const double residual = (m * v - rhs).norm();
  // M + M^dag = -kappa I, so M is never singular; a large residual is a bug.
  if (!(residual <= kChainResidualTolerance * rhs.norm())) {
    std::ostringstream os;
    os << "chain solve residual " << residual << " exceeds tolerance";
    throw NumericalFailure(os.str());
  }
  return v;
}

// Sum_j Gamma_j s_j(k) for every basis index k.
std::vector<double> basis_pulls(const std::vector<double>& rates) {
  const std::size_t dim = std::size_t{1} << rates.size();
  std::vector<double> pulls(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t j = 0; j < rates.size(); ++j) pulls[k] += ((k >> j) & 1u) ? rates[j] : -rates[j];
  return pulls;
}

double spectrum_from_field(cd field, double kappa, double drive) {
  return std::max(0.0, -2.0 * field.imag() / (kappa * drive));
}

}  // namespace

Eigen::MatrixXcd build_chain_matrix(const DeviceParams& params, AngularFrequency probe) {
  params.check();
  const auto rates = shift_rates(params);
  const auto dim = static_cast<Eigen::Index>(params.dimension());
  const double detuning = (params.cavity_freq - probe).rad_per_us();
  const double kappa = params.cavity_decay.rad_per_us();

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    m(s, s) = cd(-kappa / 2.0, -detuning);
    for (std::size_t l = 0; l < rates.size(); ++l) m(s, s ^ (Eigen::Index{1} << l)) += kI * rates[l];
  }
  return m;
}

CorrelatorVector steady_correlators(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe) {
  require_matching(params, state);
  const auto m = build_chain_matrix(params, probe);
  return {state.n_qubits(), solve_chain(m, subset_expectations(state), params.drive_amplitude().rad_per_us())};
}

std::vector<cd> chain_eigenvalues(const DeviceParams& params, AngularFrequency probe) {
  params.check();
  const auto pulls = basis_pulls(shift_rates(params));
  const double detuning = (params.cavity_freq - probe).rad_per_us();
  const double kappa = params.cavity_decay.rad_per_us();
  std::vector<cd> eig(pulls.size());
  for (std::size_t k = 0; k < pulls.size(); ++k) eig[k] = cd(-kappa / 2.0, pulls[k] - detuning);
  return eig;
}

CorrelatorVector fast_correlators(const DeviceParams& params, const DiagonalState& state, AngularFrequency probe) {
  require_matching(params, state);
  const auto eig = chain_eigenvalues(params, probe);
  const double drive = params.drive_amplitude().rad_per_us();

  // Eigenvector k of M is u_k(S) = prod_{j in S} s_j(k) = (-1)^{|S|} (-1)^{popcount(S & k)}.
  std::vector<cd> coeff(eig.size());
  const auto p = state.probs();
  for (std::size_t k = 0; k < eig.size(); ++k) coeff[k] = kI * drive * p[k] / eig[k];
  walsh_hadamard(std::span<cd>(coeff));

  CorrelatorVector out{state.n_qubits(), Eigen::VectorXcd(static_cast<Eigen::Index>(coeff.size()))};
  for (std::size_t s = 0; s < coeff.size(); ++s)
    out.entries(static_cast<Eigen::Index>(s)) = (std::popcount(s) & 1) ? -coeff[s] : coeff[s];
  return out;
}

Spectrum exact_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  require_matching(params, state);
  const double kappa = params.cavity_decay.rad_per_us();
  const Eigen::VectorXcd z = subset_expectations(state);
  // The response is linear in the drive; solve with unit amplitude.
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto m = build_chain_matrix(params, grid.at(i));
    const auto v = solve_chain(m, z, 1.0);
    values[i] = spectrum_from_field(v(0), kappa, 1.0);
  }
  return Spectrum(grid, std::move(values));
}

Spectrum mixture_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  require_matching(params, state);
  const auto centers = pulled_centers(params);
  const double half_width = params.cavity_decay.rad_per_us() / 2.0;
  const double hw2 = half_width * half_width;
  const auto p = state.probs();

  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.at(i).rad_per_us();
    double sum = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (p[k] == 0.0) continue;
      const double y = w - centers[k].rad_per_us();
      sum += p[k] / (y * y + hw2);
    }
    values[i] = sum;
  }
  return Spectrum(grid, std::move(values));
}

Spectrum fast_spectrum(const DeviceParams& params, const DiagonalState& state, const FrequencyGrid& grid) {
  require_matching(params, state);
  params.check();
  const auto pulls = basis_pulls(shift_rates(params));
  const double kappa = params.cavity_decay.rad_per_us();
  const double wf = params.cavity_freq.rad_per_us();
  const auto p = state.probs();

  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != 0.0) support.push_back(k);

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double detuning = wf - grid.at(i).rad_per_us();
    // <a> = i sum_k p_k / lambda_k at unit drive.
    cd field = 0.0;
    for (auto k : support) field += p[k] / cd(-kappa / 2.0, pulls[k] - detuning);
    values[i] = spectrum_from_field(kI * field, kappa, 1.0);
  }
  return Spectrum(grid, std::move(values));
}

FrequencyGrid default_window(const DeviceParams& params, std::size_t count) {
  const auto rates = shift_rates(params);
  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  return FrequencyGrid::centered(params.cavity_freq, AngularFrequency(total) + 10.0 * params.cavity_decay, count);
}

}  // namespace qnd
