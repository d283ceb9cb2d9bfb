#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qnd/chain.hpp"
#include "qnd/errors.hpp"
#include "qnd/presets.hpp"
#include "qnd/spectra.hpp"

using namespace qnd;
using namespace qnd::testing;
using cd = std::complex<double>;

namespace {

DeviceParams empty_cavity() {
  DeviceParams p = preset_n1_2010();
  p.qubits.clear();
  return p;
}

double gamma1_n1() { return derive_dispersive_shifts(preset_n1_2010()).qubits[0].dispersive_shift->rad_per_us(); }

}  // namespace

TEST(ChainMatrix, EmptyRegister) {
  const auto dev = empty_cavity();
  const auto probe = dev.cavity_freq - AngularFrequency(3.0);
  const auto m = build_chain_matrix(dev, probe);
  ASSERT_EQ(m.rows(), 1);
  const double kappa = dev.cavity_decay.rad_per_us();
  EXPECT_NEAR(std::abs(m(0, 0) - cd(-kappa / 2.0, -3.0)), 0.0, 1e-12);
}

TEST(ChainMatrix, OneQubitOffDiagonals) {
  const auto dev = preset_n1_2010();
  const auto m = build_chain_matrix(dev, dev.cavity_freq);
  const double g = gamma1_n1();
  EXPECT_EQ(m(0, 1), cd(0.0, g));
  EXPECT_EQ(m(1, 0), cd(0.0, g));
  EXPECT_EQ(m(0, 0), m(1, 1));
}

TEST(ChainMatrix, TwoQubitPattern) {
  const auto dev = preset_n2_2010();
  const auto m = build_chain_matrix(dev, dev.cavity_freq);
  const double g1 = AngularFrequency::from_mhz(13.0).rad_per_us();
  const double g2 = AngularFrequency::from_mhz(4.0).rad_per_us();
  // Rows/cols: {} = 0, {1} = 1, {2} = 2, {1,2} = 3. Hand expansion of the chain for j = 1, 2.
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  const cd diag(-dev.cavity_decay.rad_per_us() / 2.0, 0.0);
  for (int i = 0; i < 4; ++i) expected(i, i) = diag;
  expected(0, 1) = expected(1, 0) = cd(0, g1);
  expected(0, 2) = expected(2, 0) = cd(0, g2);
  expected(1, 3) = expected(3, 1) = cd(0, g2);
  expected(2, 3) = expected(3, 2) = cd(0, g1);
  EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ChainMatrix, RejectsTooManyQubits) {
  std::mt19937_64 rng(1);
  auto dev = random_device(rng, 13, 1.0, 1.0, 5.0);
  EXPECT_THROW(build_chain_matrix(dev, dev.cavity_freq), InvalidInput);
}

TEST(ChainMatrix, EigenvaluesHaveRealPartMinusHalfKappa) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto dev = random_device(rng, n, 0.7, 0.5, 20.0);
    const auto probe = dev.cavity_freq + AngularFrequency::from_mhz(2.5);
    const auto m = build_chain_matrix(dev, probe);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    std::vector<double> numeric, predicted;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      EXPECT_NEAR(solver.eigenvalues()(i).real(), -dev.cavity_decay.rad_per_us() / 2.0, 1e-9);
      numeric.push_back(solver.eigenvalues()(i).imag());
    }
    for (const auto& l : chain_eigenvalues(dev, probe)) predicted.push_back(l.imag());
    std::sort(numeric.begin(), numeric.end());
    std::sort(predicted.begin(), predicted.end());
    for (std::size_t i = 0; i < numeric.size(); ++i) EXPECT_NEAR(numeric[i], predicted[i], 1e-9);
  }
}

TEST(SteadyCorrelators, ResonantEmptyCavity) {
  const auto dev = empty_cavity();
  const auto v = steady_correlators(dev, DiagonalState::basis(0, 0), dev.cavity_freq);
  const double eps = dev.drive_amplitude().rad_per_us();
  const double kappa = dev.cavity_decay.rad_per_us();
  EXPECT_NEAR(std::abs(v.field() - cd(0.0, -2.0 * eps / kappa)), 0.0, 1e-14);
}

TEST(SteadyCorrelators, ExcitedQubitAtItsPull) {
  const auto dev = preset_n1_2010();
  const auto probe = dev.cavity_freq - AngularFrequency(gamma1_n1());
  const auto v = steady_correlators(dev, DiagonalState::basis(1, 1), probe);
  const double eps = dev.drive_amplitude().rad_per_us();
  const double kappa = dev.cavity_decay.rad_per_us();
  EXPECT_NEAR(std::abs(v.field() - cd(0.0, -2.0 * eps / kappa)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(v.entry(subset_of({1})) - v.field()), 0.0, 1e-12);
}

TEST(SteadyCorrelators, SuperpositionCarriesCorrelation) {
  const auto dev = preset_n1_2010();
  const auto state = DiagonalState::from_probs({0.5, 0.5});
  ASSERT_EQ(expectation_z(state, subset_of({1})), 0.0);
  for (double offset_mhz : {-9.0, -3.0, 0.0, 4.0, 7.37}) {
    const auto v = steady_correlators(dev, state, dev.cavity_freq + AngularFrequency::from_mhz(offset_mhz));
    // The factorized value z({1}) <a> is exactly zero here.
    EXPECT_GT(std::abs(v.entry(subset_of({1}))), 1e-3 * std::abs(v.field())) << offset_mhz;
  }
}

TEST(SteadyCorrelators, DriveBoundedAndSolvesSystem) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n <= 5; ++n) {
    const auto dev = random_device(rng, n, 1.3, 0.5, 30.0);
    const auto state = random_state(rng, n);
    const auto probe = dev.cavity_freq + AngularFrequency::from_mhz(1.7);
    const auto v = steady_correlators(dev, state, probe);
    const double eps = dev.drive_amplitude().rad_per_us();
    const double kappa = dev.cavity_decay.rad_per_us();
    for (Eigen::Index s = 0; s < v.entries.size(); ++s) EXPECT_LE(std::abs(v.entries(s)), eps * 2.0 / kappa * (1 + 1e-12));

    Eigen::VectorXcd z(v.entries.size());
    for (Eigen::Index s = 0; s < z.size(); ++s) z(s) = expectation_z(state, static_cast<SubsetMask>(s));
    const Eigen::VectorXcd rhs = cd(0.0, eps) * z;
    EXPECT_LE((build_chain_matrix(dev, probe) * v.entries - rhs).norm(), 1e-10 * rhs.norm());
  }
}

TEST(SteadyCorrelators, QubitCountMismatch) {
  EXPECT_THROW(steady_correlators(preset_n1_2010(), DiagonalState::basis(2, 0), AngularFrequency(0.0)), InvalidInput);
}

TEST(FastCorrelators, MatchDenseSolve) {
  std::mt19937_64 rng(9);
  for (std::size_t n = 0; n <= 6; ++n) {
    const auto dev = random_device(rng, n, 2.0, 0.3, 40.0);
    const auto state = random_state(rng, n);
    for (double offset : {-20.0, 0.0, 3.3}) {
      const auto probe = dev.cavity_freq + AngularFrequency::from_mhz(offset);
      const auto dense = steady_correlators(dev, state, probe);
      const auto fast = fast_correlators(dev, state, probe);
      const double scale = dense.entries.norm();
      EXPECT_LE((dense.entries - fast.entries).norm(), 1e-12 * scale) << "n=" << n;
    }
  }
}

TEST(WalshHadamard, SelfInverseUpToScale) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> x(32);
  for (auto& v : x) v = g(rng);
  auto y = x;
  walsh_hadamard(std::span<double>(y));
  walsh_hadamard(std::span<double>(y));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i] / 32.0, x[i], 1e-13);
}

TEST(ExactSpectrum, EmptyCavityLorentzian) {
  const auto dev = empty_cavity();
  const auto grid = FrequencyGrid::centered(dev.cavity_freq, AngularFrequency::from_mhz(10.0), 201);
  const auto s = exact_spectrum(dev, DiagonalState::basis(0, 0), grid);
  const double kappa = dev.cavity_decay.rad_per_us();
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LT(rel_diff(s[i], lorentzian(grid.at(i).rad_per_us(), dev.cavity_freq.rad_per_us(), kappa)), 1e-13);
  EXPECT_NEAR(s[100], 4.0 / (kappa * kappa), 1e-12 * s[100]);
}

TEST(ExactSpectrum, OneQubitEqualPeaksAtPulls) {
  const auto dev = preset_n1_2010();
  const auto state = DiagonalState::from_probs({0.5, 0.5});
  const double g = gamma1_n1();
  const FrequencyGrid probes(dev.cavity_freq - AngularFrequency(g), dev.cavity_freq + AngularFrequency(g), 2);
  const auto s = exact_spectrum(dev, state, probes);
  EXPECT_LT(rel_diff(s[0], s[1]), 1e-12);

  // Both are local maxima.
  const double h = 0.01 * dev.cavity_decay.rad_per_us();
  for (double c : {-g, g}) {
    const FrequencyGrid around(dev.cavity_freq + AngularFrequency(c - h), dev.cavity_freq + AngularFrequency(c + h), 3);
    const auto local = exact_spectrum(dev, state, around);
    EXPECT_GT(local[1], local[0]);
    EXPECT_GT(local[1], local[2]);
  }
}

TEST(ExactSpectrum, TwoQubitFourPeaks) {
  const auto dev = preset_n2_2010();
  const auto state = DiagonalState::from_probs({0.2, 0.2, 0.26, 0.34});
  const double h = 0.02 * dev.cavity_decay.rad_per_us();
  // |00> +17, |10> -9, |01> +9, |11> -17 (kets list qubit 1 first; k = 0, 1, 2, 3).
  for (double offset : {17.0, -9.0, 9.0, -17.0}) {
    const auto c = dev.cavity_freq + AngularFrequency::from_mhz(offset);
    const auto local = exact_spectrum(dev, state, FrequencyGrid(c - AngularFrequency(h), c + AngularFrequency(h), 3));
    EXPECT_GT(local[1], local[0]) << offset;
    EXPECT_GT(local[1], local[2]) << offset;
  }
}

TEST(MixtureSpectrum, BasisAndUniform) {
  const auto dev = preset_n1_2010();
  const double kappa = dev.cavity_decay.rad_per_us();
  const auto grid = default_window(dev, 301);
  const auto one = mixture_spectrum(dev, DiagonalState::basis(1, 1), grid);
  const auto half = mixture_spectrum(dev, DiagonalState::from_probs({0.5, 0.5}), grid);
  const double c1 = dev.cavity_freq.rad_per_us() - gamma1_n1();
  const double c0 = dev.cavity_freq.rad_per_us() + gamma1_n1();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.at(i).rad_per_us();
    EXPECT_LT(rel_diff(one[i], lorentzian(w, c1, kappa)), 1e-14);
    EXPECT_LT(rel_diff(half[i], 0.5 * lorentzian(w, c0, kappa) + 0.5 * lorentzian(w, c1, kappa)), 1e-14);
  }
}

TEST(SpectrumPaths, DenseFastMixtureAgree) {
  std::mt19937_64 rng(2024);
  for (std::size_t n = 0; n <= 8; ++n) {
    const std::size_t points = n <= 6 ? 61 : 9;
    for (int trial = 0; trial < (n <= 6 ? 3 : 1); ++trial) {
      std::uniform_real_distribution<double> kap(0.2, 5.0);
      const auto dev = random_device(rng, n, kap(rng), 0.5, 50.0);
      const auto state = random_state(rng, n);
      const auto grid = default_window(dev, points);
      const auto dense = exact_spectrum(dev, state, grid);
      const auto fast = fast_spectrum(dev, state, grid);
      const auto mix = mixture_spectrum(dev, state, grid);
      EXPECT_LT(max_rel_diff(dense.values(), mix.values()), 1e-10) << "n=" << n;
      EXPECT_LT(max_rel_diff(fast.values(), mix.values()), 1e-10) << "n=" << n;
    }
  }
}

TEST(SpectrumPaths, FastEmptyRegister) {
  const auto dev = empty_cavity();
  const auto grid = FrequencyGrid::centered(dev.cavity_freq, AngularFrequency::from_mhz(5.0), 51);
  const auto s = fast_spectrum(dev, DiagonalState::basis(0, 0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LT(rel_diff(s[i], lorentzian(grid.at(i).rad_per_us(), dev.cavity_freq.rad_per_us(), dev.cavity_decay.rad_per_us())), 1e-14);
}

TEST(SpectrumProperties, MirrorSymmetry) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto dev = random_device(rng, n, 1.0, 0.5, 10.0);
    const auto state = random_state(rng, n);
    const auto grid = default_window(dev, 101);
    const auto s = exact_spectrum(dev, state, grid);
    const auto flipped = exact_spectrum(dev, state.bit_complement(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(rel_diff(s[i], flipped[grid.size() - 1 - i]), 1e-11);
  }
}

TEST(SpectrumProperties, IntegratedAreaIsTwoPiOverKappa) {
  std::mt19937_64 rng(23);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto dev = random_device(rng, n, 1.0, 0.5, 5.0);
    const auto state = random_state(rng, n);
    const double kappa = dev.cavity_decay.rad_per_us();
    const auto grid = FrequencyGrid::centered(dev.cavity_freq, AngularFrequency(64.0 * kappa), 128 * 20 + 1);
    const auto s = exact_spectrum(dev, state, grid);
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) area += 0.5 * (s[i] + s[i + 1]) * grid.step().rad_per_us();
    EXPECT_NEAR(area / (2.0 * std::numbers::pi / kappa), 1.0, 0.02);
  }
}

TEST(SpectrumProperties, BasisStatesReduceToMeanField) {
  std::mt19937_64 rng(29);
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto dev = random_device(rng, n, 1.0, 0.5, 10.0);
    const auto grid = default_window(dev, 81);
    for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
      const auto state = DiagonalState::basis(n, k);
      EXPECT_LT(max_rel_diff(exact_spectrum(dev, state, grid).values(), meanfield_spectrum(dev, state, grid).values()), 1e-12);
    }
  }
}

TEST(SpectrumProperties, WellSeparatedPeakHeights) {
  // Shifts 2^j * 20 kappa keep every pair of pulled centers >= 40 kappa apart.
  DeviceParams dev = preset_n2_2010();
  dev.cavity_decay = AngularFrequency::from_mhz(0.5);
  dev.qubits = {QubitParams::from_shift(AngularFrequency::from_mhz(10.0)), QubitParams::from_shift(AngularFrequency::from_mhz(20.0)),
                QubitParams::from_shift(AngularFrequency::from_mhz(40.0))};
  std::mt19937_64 rng(31);
  const double kappa = dev.cavity_decay.rad_per_us();
  for (int trial = 0; trial < 10; ++trial) {
    const auto state = random_state(rng, 3, 0.5);
    const auto centers = pulled_centers(dev);
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const auto s = exact_spectrum(dev, state, FrequencyGrid(centers[k], centers[k] + AngularFrequency(1e-9), 2));
      EXPECT_NEAR(s[0] / (state[k] * 4.0 / (kappa * kappa)), 1.0, 0.02);
    }
  }
}
