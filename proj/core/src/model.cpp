#include "qnd/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

std::string qubit_label(std::size_t index0) { return "qubit " + std::to_string(index0 + 1); }

bool finite(AngularFrequency f) { return std::isfinite(f.rad_per_us()); }

}  // namespace

QubitParams QubitParams::from_coupling(AngularFrequency omega, AngularFrequency g, std::optional<double> t1_us) {
  QubitParams q;
  q.transition_freq = omega;
  q.coupling = g;
  q.t1_us = t1_us;
  return q;
}

QubitParams QubitParams::from_shift(AngularFrequency shift, std::optional<double> t1_us) {
  QubitParams q;
  q.direct_shift = shift;
  q.t1_us = t1_us;
  return q;
}

bool DeviceParams::shifts_derived() const {
  return std::all_of(qubits.begin(), qubits.end(), [](const QubitParams& q) { return q.dispersive_shift.has_value(); });
}

void DeviceParams::check() const {
  if (!finite(cavity_freq)) throw InvalidInput("cavity frequency must be finite");
  if (!finite(cavity_decay) || cavity_decay.rad_per_us() <= 0.0)
    throw InvalidInput("cavity decay rate kappa must be finite and > 0");
  if (drive && (!finite(*drive) || drive->rad_per_us() < 0.0))
    throw InvalidInput("drive amplitude must be finite and >= 0");
  if (qubits.size() > max_qubits) {
    std::ostringstream os;
    os << "too many qubits: " << qubits.size() << " exceeds the cap of " << max_qubits;
    throw InvalidInput(os.str());
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    if (q.transition_freq && !finite(*q.transition_freq))
      throw InvalidInput(qubit_label(i) + ": transition frequency must be finite");
    if (q.coupling && (!finite(*q.coupling) || q.coupling->rad_per_us() < 0.0))
      throw InvalidInput(qubit_label(i) + ": coupling must be finite and >= 0");
    if (q.direct_shift && (!finite(*q.direct_shift) || q.direct_shift->rad_per_us() < 0.0))
      throw InvalidInput(qubit_label(i) + ": dispersive shift must be finite and >= 0");
    if (q.t1_us && !(*q.t1_us > 0.0)) throw InvalidInput(qubit_label(i) + ": t1 must be > 0");
  }
}

DeviceParams derive_dispersive_shifts(DeviceParams params) {
  params.check();
  for (std::size_t i = 0; i < params.qubits.size(); ++i) {
    auto& q = params.qubits[i];
    const bool has_pair = q.transition_freq && q.coupling;
    if (q.direct_shift && (q.transition_freq || q.coupling))
      throw InvalidInput(qubit_label(i) + ": give either (omega, g) or a direct dispersive shift, not both");
    if (q.direct_shift) {
      q.dispersive_shift = *q.direct_shift;
      q.renormalized_freq.reset();
    } else if (has_pair) {
      const double detuning = std::abs(params.cavity_freq.rad_per_us() - q.transition_freq->rad_per_us());
      if (detuning == 0.0) throw InvalidInput(qubit_label(i) + " is resonant with the cavity (Delta = 0)");
      const double g = q.coupling->rad_per_us();
      q.dispersive_shift = AngularFrequency(g * g / detuning);
      q.renormalized_freq = *q.transition_freq - *q.dispersive_shift;
    } else {
      throw InvalidInput(qubit_label(i) + ": needs both omega and g, or a direct dispersive shift");
    }
  }
  return params;
}

std::vector<double> shift_rates(const DeviceParams& params) {
  std::vector<double> rates;
  rates.reserve(params.qubits.size());
  if (params.shifts_derived()) {
    params.check();
    for (const auto& q : params.qubits) rates.push_back(q.dispersive_shift->rad_per_us());
  } else {
    for (const auto& q : derive_dispersive_shifts(params).qubits) rates.push_back(q.dispersive_shift->rad_per_us());
  }
  return rates;
}

bool DispersiveReport::passed() const {
  return std::all_of(ratios.begin(), ratios.end(), [](const RatioCheck& r) { return r.passed; });
}

DispersiveReport validate_dispersive(const DeviceParams& params, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("dispersive threshold must lie in (0, 1)");
  const DeviceParams dev = derive_dispersive_shifts(params);
  const double wf = dev.cavity_freq.rad_per_us();
  const auto n = dev.qubits.size();

  DispersiveReport report;
  report.threshold = threshold;
  auto add = [&](std::string label, std::size_t i, std::size_t j, double value) {
    report.ratios.push_back({std::move(label), i, j, value, value > 0.0 && value < threshold});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& q = dev.qubits[i];
    if (q.direct_shift) {
      report.ratios.push_back({"Gamma_j > 0", i + 1, 0, q.direct_shift->mhz(), q.direct_shift->rad_per_us() > 0.0});
      report.notes.push_back(qubit_label(i) + ": direct shift given, coupling ratios not available");
      continue;
    }
    const double delta = std::abs(wf - q.transition_freq->rad_per_us());
    add("g_j/Delta_j", i + 1, 0, q.coupling->rad_per_us() / delta);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& qi = dev.qubits[i];
      const auto& qj = dev.qubits[j];
      if (qi.direct_shift || qj.direct_shift) continue;
      const double wi = qi.transition_freq->rad_per_us();
      const double wj = qj.transition_freq->rad_per_us();
      const double dij = std::abs(wi - wj);
      if (dij == 0.0)
        throw InvalidInput("degenerate qubits: " + qubit_label(i) + " and " + qubit_label(j) +
                           " have equal transition frequencies (Delta_ij = 0)");
      const double gg = qi.coupling->rad_per_us() * qj.coupling->rad_per_us();
      add("g_i g_j/(Delta_i Delta_ij)", i + 1, j + 1, gg / (std::abs(wf - wi) * dij));
      add("g_i g_j/(Delta_j Delta_ij)", i + 1, j + 1, gg / (std::abs(wf - wj) * dij));
    }
  }

  const double kappa = dev.cavity_decay.rad_per_us();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t1 = dev.qubits[i].t1_us;
    if (!t1 || std::isinf(*t1)) continue;
    const double ratio = (1.0 / *t1) / kappa;
    report.decay.push_back({i + 1, ratio, ratio > kDecayWarnRatio});
  }
  return report;
}

int basis_sign(std::size_t k, std::size_t j, std::size_t n_qubits) {
  if (n_qubits >= 32) throw InvalidInput("basis_sign: too many qubits");
  if (k >= (std::size_t{1} << n_qubits)) throw InvalidInput("basis_sign: basis index out of range");
  if (j < 1 || j > n_qubits) throw InvalidInput("basis_sign: qubit index out of range");
  return ((k >> (j - 1)) & 1u) ? +1 : -1;
}

SubsetMask subset_of(std::initializer_list<std::size_t> qubits) {
  SubsetMask mask = 0;
  for (auto j : qubits) {
    if (j < 1 || j > 32) throw InvalidInput("subset_of: qubit index out of range");
    mask |= SubsetMask{1} << (j - 1);
  }
  return mask;
}

DiagonalState DiagonalState::from_probs(std::vector<double> probs) {
  const auto size = probs.size();
  if (size == 0 || !std::has_single_bit(size))
    throw InvalidInput("state: probability vector length must be a power of two");
  const auto n = static_cast<std::size_t>(std::countr_zero(size));
  if (n > 30) throw InvalidInput("state: too many qubits");
  for (std::size_t k = 0; k < size; ++k) {
    if (!std::isfinite(probs[k]) || probs[k] < 0.0 || probs[k] > 1.0) {
      std::ostringstream os;
      os << "state: probs[" << k << "] = " << probs[k] << " is outside [0, 1]";
      throw InvalidInput(os.str());
    }
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "state: probabilities sum to " << sum << ", expected 1";
    throw InvalidInput(os.str());
  }
  return DiagonalState(n, std::move(probs));
}

DiagonalState DiagonalState::basis(std::size_t n_qubits, std::size_t k) {
  if (n_qubits > 30 || k >= (std::size_t{1} << n_qubits)) throw InvalidInput("basis state index out of range");
  std::vector<double> p(std::size_t{1} << n_qubits, 0.0);
  p[k] = 1.0;
  return DiagonalState(n_qubits, std::move(p));
}

DiagonalState DiagonalState::bit_complement() const {
  const std::size_t all = probs_.size() - 1;
  std::vector<double> p(probs_.size());
  for (std::size_t k = 0; k < probs_.size(); ++k) p[k] = probs_[all ^ k];
  return DiagonalState(n_qubits_, std::move(p));
}

bool DiagonalState::is_basis_state() const {
  return std::count_if(probs_.begin(), probs_.end(), [](double p) { return p != 0.0; }) == 1;
}

double expectation_z(const DiagonalState& state, SubsetMask subset) {
  if (state.n_qubits() < 32 && (subset >> state.n_qubits()) != 0)
    throw InvalidInput("expectation_z: subset references a qubit outside the register");
  double sum = 0.0;
  const auto p = state.probs();
  for (std::size_t k = 0; k < p.size(); ++k) {
    // Each qubit of the subset found in |0> contributes a factor -1.
    const auto zeros = std::popcount(static_cast<SubsetMask>(subset & ~static_cast<SubsetMask>(k)));
    sum += (zeros & 1) ? -p[k] : p[k];
  }
  return sum;
}

std::vector<AngularFrequency> pulled_centers(const DeviceParams& params) {
  const auto rates = shift_rates(params);
  const std::size_t dim = params.dimension();
  std::vector<AngularFrequency> centers(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double pull = 0.0;
    for (std::size_t j = 0; j < rates.size(); ++j) pull += ((k >> j) & 1u) ? rates[j] : -rates[j];
    centers[k] = params.cavity_freq - AngularFrequency(pull);
  }
  return centers;
}

FrequencyGrid::FrequencyGrid(AngularFrequency start, AngularFrequency stop, std::size_t count)
    : start_(start), stop_(stop), count_(count) {
  if (!std::isfinite(start.rad_per_us()) || !std::isfinite(stop.rad_per_us()))
    throw InvalidInput("grid: bounds must be finite");
  if (!(start < stop)) throw InvalidInput("grid: start must be below stop");
  if (count < 2) throw InvalidInput("grid: need at least 2 points");
}

FrequencyGrid FrequencyGrid::centered(AngularFrequency center, AngularFrequency half_span, std::size_t count) {
  return FrequencyGrid(center - half_span, center + half_span, count);
}

AngularFrequency FrequencyGrid::at(std::size_t i) const {
  if (i + 1 == count_) return stop_;
  return start_ + (stop_ - start_) * (static_cast<double>(i) / static_cast<double>(count_ - 1));
}

Spectrum::Spectrum(FrequencyGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidInput("spectrum: value count does not match the grid");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      std::ostringstream os;
      os << "spectrum: value " << values_[i] << " at index " << i << " is negative or not finite";
      throw InvalidInput(os.str());
    }
  }
}

Spectrum Spectrum::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidInput("spectrum: scale factor must be > 0");
  std::vector<double> v(values_);
  for (auto& x : v) x *= factor;
  return Spectrum(grid_, std::move(v));
}

}  // namespace qnd
