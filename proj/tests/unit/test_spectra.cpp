#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qnd/chain.hpp"
#include "qnd/errors.hpp"
#include "qnd/presets.hpp"
#include "qnd/spectra.hpp"

using namespace qnd;
using namespace qnd::testing;

namespace {

DeviceParams with_shifts(double kappa_mhz, std::vector<double> shifts_mhz) {
  DeviceParams p;
  p.cavity_freq = AngularFrequency::from_mhz(6000.0);
  p.cavity_decay = AngularFrequency::from_mhz(kappa_mhz);
  for (double s : shifts_mhz) p.qubits.push_back(QubitParams::from_shift(AngularFrequency::from_mhz(s)));
  return p;
}

}  // namespace

TEST(EmptyCavity, PeakAndHalfWidth) {
  const auto dev = preset_n1_2010();
  const double kappa = dev.cavity_decay.rad_per_us();
  const FrequencyGrid grid(dev.cavity_freq, dev.cavity_freq + AngularFrequency(kappa / 2.0), 2);
  const auto s = empty_cavity_spectrum(dev, grid);
  EXPECT_NEAR(s[0], 4.0 / (kappa * kappa), 1e-12 * s[0]);
  EXPECT_NEAR(s[1], 2.0 / (kappa * kappa), 1e-11 * s[1]);
}

TEST(MeanField, CenterFollowsPolarization) {
  const auto dev = preset_n2_2010();
  const auto state = DiagonalState::from_probs({0.2, 0.2, 0.26, 0.34});
  // <sz1> = 0.08, <sz2> = 0.2: center at omega_f - (13 * 0.08 + 4 * 0.2) MHz.
  const auto center = dev.cavity_freq - AngularFrequency::from_mhz(13.0 * 0.08 + 4.0 * 0.2);
  const double kappa = dev.cavity_decay.rad_per_us();
  const auto grid = default_window(dev, 401);
  const auto s = meanfield_spectrum(dev, state, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LT(rel_diff(s[i], lorentzian(grid.at(i).rad_per_us(), center.rad_per_us(), kappa)), 1e-12);
}

TEST(ClosedFormOneQubit, ValueAtBareCavity) {
  const auto dev = preset_n1_2010();
  const auto gamma = shift_rates(dev)[0];
  const double lambda = gamma * gamma + std::pow(dev.cavity_decay.rad_per_us() / 2.0, 2);
  for (double p1 : {0.0, 0.3, 1.0}) {
    const auto s = closed_form_n1(dev, DiagonalState::from_probs({1.0 - p1, p1}), FrequencyGrid(dev.cavity_freq, dev.cavity_freq + AngularFrequency(1.0), 2));
    EXPECT_NEAR(s[0], 1.0 / lambda, 1e-14 / lambda);
  }
}

TEST(ClosedFormOneQubit, MatchesChainSolve) {
  std::mt19937_64 rng(41);
  const std::vector<DeviceParams> devices = {preset_n1_2010(), with_shifts(1.0, {0.05}), with_shifts(1.0, {0.5}),
                                             with_shifts(1.0, {5.0}), with_shifts(1.0, {50.0})};
  for (const auto& dev : devices) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto state = random_state(rng, 1);
      const auto grid = default_window(dev, 201);
      EXPECT_LT(max_rel_diff(closed_form_n1(dev, state, grid).values(), exact_spectrum(dev, state, grid).values()), 1e-10);
    }
  }
}

TEST(ClosedFormTwoQubit, MatchesChainSolveOnPreset) {
  const auto dev = preset_n2_2010();
  const auto grid = default_window(dev, 801);
  for (const auto& probs : std::vector<std::vector<double>>{{0.25, 0.25, 0.25, 0.25}, {0.2, 0.2, 0.26, 0.34}, {1, 0, 0, 0}, {0, 0, 0, 1}}) {
    const auto state = DiagonalState::from_probs(probs);
    EXPECT_LT(max_rel_diff(closed_form_n2(dev, state, grid).values(), exact_spectrum(dev, state, grid).values()), 1e-9);
  }
}

TEST(ClosedFormTwoQubit, MatchesChainSolveAcrossThreeDecades) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> log_ratio(std::log(0.1), std::log(100.0));
  for (int trial = 0; trial < 40; ++trial) {
    const double kappa = 1.0;
    const auto dev = with_shifts(kappa, {kappa * std::exp(log_ratio(rng)), kappa * std::exp(log_ratio(rng))});
    const auto state = random_state(rng, 2);
    const auto grid = default_window(dev, 301);
    EXPECT_LT(max_rel_diff(closed_form_n2(dev, state, grid).values(), exact_spectrum(dev, state, grid).values()), 1e-9)
        << "trial " << trial;
  }
}

TEST(ClosedForms, RejectWrongQubitCount) {
  const auto dev1 = preset_n1_2010();
  const auto dev2 = preset_n2_2010();
  const auto grid = default_window(dev2, 11);
  EXPECT_THROW(closed_form_n1(dev2, DiagonalState::basis(2, 0), grid), InvalidInput);
  EXPECT_THROW(closed_form_n2(dev1, DiagonalState::basis(1, 0), grid), InvalidInput);
  EXPECT_THROW(closed_form_n1(dev1, DiagonalState::basis(2, 0), grid), InvalidInput);
  EXPECT_THROW(meanfield_spectrum(dev1, DiagonalState::basis(2, 0), grid), InvalidInput);
}

TEST(ClosedForms, DispatchAndNames) {
  const auto dev = preset_n1_2010();
  const auto state = DiagonalState::from_probs({0.4, 0.6});
  const auto grid = default_window(dev, 21);
  EXPECT_EQ(closed_form_spectrum(ClosedFormKind::OneQubit, dev, state, grid).values()[7], closed_form_n1(dev, state, grid)[7]);
  EXPECT_EQ(closed_form_spectrum(ClosedFormKind::EmptyCavity, dev, state, grid)[3], empty_cavity_spectrum(dev, grid)[3]);
  EXPECT_EQ(to_string(ClosedFormKind::EmptyCavity), "empty");
  EXPECT_EQ(to_string(ClosedFormKind::MeanField), "meanfield");
  EXPECT_EQ(to_string(ClosedFormKind::OneQubit), "closed1");
  EXPECT_EQ(to_string(ClosedFormKind::TwoQubit), "closed2");
}

TEST(MeanField, FailsForSuperpositions) {
  std::mt19937_64 rng(47);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto dev = random_device(rng, n, 1.0, 1.0, 10.0);
      const auto state = random_state(rng, n, 0.5);
      ASSERT_FALSE(state.is_basis_state());
      const auto grid = default_window(dev, 401);
      const auto exact = exact_spectrum(dev, state, grid);
      const auto mf = meanfield_spectrum(dev, state, grid);
      double worst = 0.0;
      double peak = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(exact[i] - mf[i]));
        peak = std::max(peak, exact[i]);
      }
      EXPECT_GT(worst / peak, 0.10) << "n=" << n;
    }
  }
}

TEST(ClosedFormOneQubit, PeakHeightsFollowPopulations) {
  const auto dev = preset_n1_2010();
  const double gamma = shift_rates(dev)[0];
  const auto state = DiagonalState::from_probs({0.34, 0.66});
  const FrequencyGrid at_peaks(dev.cavity_freq - AngularFrequency(gamma), dev.cavity_freq + AngularFrequency(gamma), 2);
  const auto s = closed_form_n1(dev, state, at_peaks);
  // s[1] sits at the |0> peak, s[0] at the |1> peak.
  const double frac0 = s[1] / (s[0] + s[1]);
  EXPECT_NEAR(frac0, 0.34, 0.01);
}
