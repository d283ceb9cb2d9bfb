#include "qnd/infer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qnd/errors.hpp"
#include "qnd/nnls.hpp"

namespace qnd {

std::vector<std::vector<std::size_t>> CenterTable::degenerate_groups() const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& g : groups)
    if (g.size() > 1) out.push_back(g);
  return out;
}

std::size_t CenterTable::group_of(std::size_t basis_index) const {
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (std::find(groups[i].begin(), groups[i].end(), basis_index) != groups[i].end()) return i;
  throw InvalidInput("basis index not present in center table");
}

CenterTable predicted_centers(const DeviceParams& params) {
  CenterTable table;
  table.centers = pulled_centers(params);
  const double tol = kDegeneracyFraction * params.cavity_decay.rad_per_us();

  std::vector<std::size_t> order(table.centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return table.centers[a] < table.centers[b]; });

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const bool joins = i > 0 && (table.centers[order[i]] - table.centers[order[i - 1]]).rad_per_us() <= tol;
    if (!joins) groups.emplace_back();
    groups.back().push_back(order[i]);
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  table.groups = std::move(groups);
  return table;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double prominence) {
  return find_peaks(spectrum.grid(), spectrum.values(), prominence);
}

std::vector<Peak> find_peaks(const FrequencyGrid& grid, std::span<const double> v, double prominence) {
  if (v.empty()) throw InvalidInput("find_peaks: empty spectrum");
  if (v.size() != grid.size()) throw InvalidInput("find_peaks: sample count does not match the grid");
  if (!(prominence > 0.0 && prominence < 1.0)) throw InvalidInput("find_peaks: prominence must lie in (0, 1)");

  const std::size_t n = v.size();
  const double global_max = *std::max_element(v.begin(), v.end());
  std::vector<Peak> peaks;
  if (!(global_max > 0.0)) return peaks;
  const double step = grid.step().rad_per_us();

  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(v[i] > v[i - 1])) {
      ++i;
      continue;
    }
    // Walk across a plateau of equal samples.
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 >= n || !(v[j + 1] < v[i])) {
      i = j + 1;
      continue;
    }
    const std::size_t top = (i + j) / 2;
    const double h = v[top];

    double left_min = h;
    for (std::size_t l = i; l-- > 0;) {
      if (v[l] > h) break;
      left_min = std::min(left_min, v[l]);
    }
    double right_min = h;
    for (std::size_t r = j + 1; r < n; ++r) {
      if (v[r] > h) break;
      right_min = std::min(right_min, v[r]);
    }
    const double prom = h - std::max(left_min, right_min);

    if (prom >= prominence * global_max) {
      double offset = 0.0;
      double height = h;
      if (i == j) {
        const double y0 = v[top - 1];
        const double y1 = v[top];
        const double y2 = v[top + 1];
        const double curv = y0 - 2.0 * y1 + y2;
        if (curv < 0.0) {
          offset = std::clamp(0.5 * (y0 - y2) / curv, -0.5, 0.5);
          height = y1 - 0.25 * (y0 - y2) * offset;
        }
      } else if ((j - i) % 2 == 1) {
        offset = 0.5;
      }
      peaks.push_back({grid.at(top) + AngularFrequency(offset * step), height, std::nullopt, std::nullopt});
    }
    i = j + 1;
  }
  return peaks;
}

PeakReport assign_peaks(std::vector<Peak> peaks, const DeviceParams& params, const FrequencyGrid& grid) {
  const auto table = predicted_centers(params);
  const double reach = std::max(grid.step().rad_per_us(), params.cavity_decay.rad_per_us() / 2.0);

  PeakReport report;
  report.groups = table.groups;
  report.degenerate_groups = table.degenerate_groups();

  std::vector<double> group_center(table.groups.size());
  for (std::size_t g = 0; g < table.groups.size(); ++g)
    group_center[g] = table.centers[table.groups[g].front()].rad_per_us();

  // Closest pairs first so each group goes to its best peak.
  struct Candidate {
    double distance;
    std::size_t peak;
    std::size_t group;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < peaks.size(); ++p)
    for (std::size_t g = 0; g < group_center.size(); ++g) {
      const double d = std::abs(peaks[p].location.rad_per_us() - group_center[g]);
      if (d <= reach) candidates.push_back({d, p, g});
    }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });

  std::vector<bool> peak_used(peaks.size(), false);
  std::vector<bool> group_used(group_center.size(), false);
  for (const auto& c : candidates) {
    if (peak_used[c.peak] || group_used[c.group]) continue;
    peak_used[c.peak] = group_used[c.group] = true;
    peaks[c.peak].group = c.group;
    if (table.groups[c.group].size() == 1) peaks[c.peak].basis_index = table.groups[c.group].front();
    report.residual = std::max(report.residual, c.distance);
  }
  report.peaks = std::move(peaks);
  return report;
}

std::vector<double> WeightEstimate::basis_probs() const {
  std::size_t dim = 0;
  for (const auto& g : groups) dim += g.size();
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].size() != 1) throw InvalidInput("weights of degenerate basis states cannot be separated");
    out[groups[i].front()] = probs[i];
  }
  return out;
}

WeightEstimate infer_weights(const Spectrum& spectrum, const DeviceParams& params) {
  return infer_weights(spectrum.grid(), spectrum.values(), params);
}

WeightEstimate infer_weights(const FrequencyGrid& grid, std::span<const double> samples, const DeviceParams& params) {
  if (samples.size() != grid.size()) throw InvalidInput("infer: sample count does not match the grid");
  const auto table = predicted_centers(params);
  const double kappa = params.cavity_decay.rad_per_us();

  const auto [lo, hi] = std::minmax_element(table.centers.begin(), table.centers.end());
  const double slack = 1e-9 * std::max(std::abs(grid.start().rad_per_us()), std::abs(grid.stop().rad_per_us()));
  if (lo->rad_per_us() < grid.start().rad_per_us() - slack || hi->rad_per_us() > grid.stop().rad_per_us() + slack) {
    std::ostringstream os;
    os << "infer: grid [" << grid.start().mhz() << ", " << grid.stop().mhz() << "] MHz does not span the predicted centers ["
       << lo->mhz() << ", " << hi->mhz() << "] MHz";
    throw InvalidInput(os.str());
  }
  if (grid.step().rad_per_us() > kappa / 3.0) throw InvalidInput("infer: grid too coarse, need >= 3 points per kappa");

  const auto m = static_cast<Eigen::Index>(samples.size());
  const auto ng = static_cast<Eigen::Index>(table.groups.size());
  const double hw2 = kappa * kappa / 4.0;

  // Columns normalized to unit norm, data to unit max; weights rescaled afterwards.
  Eigen::MatrixXd a(m, ng);
  for (Eigen::Index g = 0; g < ng; ++g) {
    const auto& members = table.groups[static_cast<std::size_t>(g)];
    double c = 0.0;
    for (auto k : members) c += table.centers[k].rad_per_us();
    c /= static_cast<double>(members.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      const double y = grid.at(static_cast<std::size_t>(i)).rad_per_us() - c;
      a(i, g) = 1.0 / (y * y + hw2);
    }
  }
  Eigen::VectorXd col_norm = a.colwise().norm().transpose();
  for (Eigen::Index g = 0; g < ng; ++g) a.col(g) /= col_norm(g);

  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = samples[static_cast<std::size_t>(i)];
  const double scale = b.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("infer: spectrum carries no signal");
  b /= scale;

  const auto fit = nnls(a, b, kNnlsTolerance);
  Eigen::VectorXd w = fit.x.cwiseQuotient(col_norm);
  const double total = w.sum();
  if (!(total > 0.0)) throw InvalidInput("infer: fit produced no positive weight");

  WeightEstimate est;
  est.groups = table.groups;
  est.probs.resize(static_cast<std::size_t>(ng));
  for (Eigen::Index g = 0; g < ng; ++g) est.probs[static_cast<std::size_t>(g)] = w(g) / total;
  est.residual_norm = fit.residual_norm / b.norm();
  est.kkt_residual = fit.kkt_residual;
  est.iterations = fit.iterations;
  est.unresolvable = !table.degenerate_groups().empty();
  return est;
}

std::vector<double> height_reading_weights(const Spectrum& spectrum, const DeviceParams& params) {
  const auto centers = pulled_centers(params);
  const auto& grid = spectrum.grid();
  const double hw2 = params.cavity_decay.rad_per_us() * params.cavity_decay.rad_per_us() / 4.0;
  const double start = grid.start().rad_per_us();
  const double step = grid.step().rad_per_us();

  std::vector<double> w(centers.size(), 0.0);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double x = (centers[k].rad_per_us() - start) / step;
    if (x < 0.0 || x > static_cast<double>(grid.size() - 1)) continue;
    const auto i = std::min(static_cast<std::size_t>(x), grid.size() - 2);
    const double f = x - static_cast<double>(i);
    w[k] = ((1.0 - f) * spectrum[i] + f * spectrum[i + 1]) * hw2;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total > 0.0)
    for (auto& x : w) x /= total;
  return w;
}

}  // namespace qnd
