#include "qnd/decay.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qnd/chain.hpp"
#include "qnd/errors.hpp"

namespace qnd {

namespace {

struct Column2 {
  double m00, m01, m10, m11;  // rows = final bit, columns = initial bit
};

void apply_on_qubit(std::vector<double>& p, std::size_t j, const Column2& m) {
  const std::size_t bit = std::size_t{1} << j;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k & bit) continue;
    const double x0 = p[k];
    const double x1 = p[k | bit];
    p[k] = m.m00 * x0 + m.m01 * x1;
    p[k | bit] = m.m10 * x0 + m.m11 * x1;
  }
}

void check_t1(const DiagonalState& state, std::span<const double> t1_us) {
  if (t1_us.size() != state.n_qubits()) throw InvalidInput("decay: need one T1 per qubit");
  for (double t : t1_us)
    if (!(t > 0.0)) throw InvalidInput("decay: T1 must be > 0");
}

double rate(double t1) { return std::isinf(t1) ? 0.0 : 1.0 / t1; }

// Round-off from signed sums can leave entries like -1e-18.
DiagonalState settle(std::vector<double> p) {
  for (auto& x : p) {
    if (x < 0.0 && x > -1e-12) x = 0.0;
    if (x > 1.0 && x < 1.0 + 1e-12) x = 1.0;
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(sum - 1.0) < 1e-12)
    for (auto& x : p) x /= sum;
  return DiagonalState::from_probs(std::move(p));
}

// (1/T) int_0^T exp(-r t) dt
double mean_exponential(double r, double span) {
  const double x = r * span;
  return x == 0.0 ? 1.0 : -std::expm1(-x) / x;
}

}  // namespace

std::vector<double> t1_times(const DeviceParams& params) {
  std::vector<double> t1;
  t1.reserve(params.n_qubits());
  for (const auto& q : params.qubits) t1.push_back(q.t1_us.value_or(kDefaultT1Us));
  return t1;
}

DiagonalState decay_populations(const DiagonalState& initial, std::span<const double> t1_us, double tau_us) {
  check_t1(initial, t1_us);
  if (!(tau_us >= 0.0) || !std::isfinite(tau_us)) throw InvalidInput("decay: tau must be finite and >= 0");
  std::vector<double> p(initial.probs().begin(), initial.probs().end());
  for (std::size_t j = 0; j < t1_us.size(); ++j) {
    const double survive = std::exp(-rate(t1_us[j]) * tau_us);
    apply_on_qubit(p, j, {1.0, 1.0 - survive, 0.0, survive});
  }
  return settle(std::move(p));
}

DecayTrajectory decay_trajectory(const DiagonalState& initial, std::span<const double> t1_us,
                                 std::span<const double> times_us) {
  DecayTrajectory out;
  out.times_us.assign(times_us.begin(), times_us.end());
  out.states.reserve(times_us.size());
  for (double t : times_us) out.states.push_back(decay_populations(initial, t1_us, t));
  return out;
}

std::vector<std::string> timescale_warnings(const DeviceParams& params) {
  std::vector<std::string> warnings;
  const double kappa = params.cavity_decay.rad_per_us();
  const auto t1 = t1_times(params);
  for (std::size_t j = 0; j < t1.size(); ++j) {
    const double ratio = rate(t1[j]) / kappa;
    if (ratio > kDecayWarnRatio) {
      std::ostringstream os;
      os << "qubit " << j + 1 << ": 1/T1 is " << ratio << " of kappa; the quasi-static picture needs 1/T1 << kappa";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

Spectrum quasi_static_spectrum(const DeviceParams& params, const DiagonalState& initial, double tau_us,
                               const FrequencyGrid& grid) {
  const auto t1 = t1_times(params);
  return exact_spectrum(params, decay_populations(initial, t1, tau_us), grid);
}

DiagonalState time_averaged_populations(const DiagonalState& initial, std::span<const double> t1_us,
                                        double tau_max_us, Averaging method, std::size_t n_steps) {
  check_t1(initial, t1_us);
  if (!(tau_max_us >= 0.0) || !std::isfinite(tau_max_us))
    throw InvalidInput("decay: averaging window must be finite and >= 0");
  if (tau_max_us == 0.0) return initial;

  const auto p0 = initial.probs();
  std::vector<double> avg(p0.size(), 0.0);

  if (method == Averaging::Trapezoid) {
    if (n_steps < 2) throw InvalidInput("decay: trapezoid averaging needs n_steps >= 2");
    const double h = tau_max_us / static_cast<double>(n_steps);
    for (std::size_t i = 0; i <= n_steps; ++i) {
      const double w = (i == 0 || i == n_steps) ? 0.5 : 1.0;
      const auto s = decay_populations(initial, t1_us, h * static_cast<double>(i));
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += w * s[k];
    }
    for (auto& x : avg) x /= static_cast<double>(n_steps);
    return settle(std::move(avg));
  }

  // Per qubit: [[1, 1 - e], [0, e]] = P0 + e P1 with P0 = [[1, 1], [0, 0]], P1 = [[0, -1], [0, 1]].
  const std::size_t n = initial.n_qubits();
  std::vector<double> work(p0.size());
  for (std::size_t subset = 0; subset < (std::size_t{1} << n); ++subset) {
    double total_rate = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if ((subset >> j) & 1u) total_rate += rate(t1_us[j]);
    const double weight = mean_exponential(total_rate, tau_max_us);
    work.assign(p0.begin(), p0.end());
    for (std::size_t j = 0; j < n; ++j) {
      if ((subset >> j) & 1u)
        apply_on_qubit(work, j, {0.0, -1.0, 0.0, 1.0});
      else
        apply_on_qubit(work, j, {1.0, 1.0, 0.0, 0.0});
    }
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += weight * work[k];
  }
  return settle(std::move(avg));
}

Spectrum time_averaged_spectrum(const DeviceParams& params, const DiagonalState& initial, double tau_max_us,
                                std::size_t n_steps, const FrequencyGrid& grid, Averaging method) {
  if (n_steps < 2) throw InvalidInput("decay: n_steps must be >= 2");
  const auto t1 = t1_times(params);
  return exact_spectrum(params, time_averaged_populations(initial, t1, tau_max_us, method, n_steps), grid);
}

}  // namespace qnd
