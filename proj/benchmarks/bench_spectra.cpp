#include <random>

#include <benchmark/benchmark.h>

#include "qnd/chain.hpp"
#include "qnd/infer.hpp"
#include "qnd/lindblad.hpp"
#include "qnd/presets.hpp"

namespace {

using namespace qnd;

DeviceParams random_device(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> shift(0.5, 5.0);
  DeviceParams p;
  p.cavity_freq = AngularFrequency::from_mhz(6000.0);
  p.cavity_decay = AngularFrequency::from_mhz(1.0);
  for (std::size_t j = 0; j < n; ++j) p.qubits.push_back(QubitParams::from_shift(AngularFrequency::from_mhz(shift(rng))));
  return p;
}

DiagonalState random_state(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(std::size_t{1} << n);
  double sum = 0.0;
  for (auto& x : p) sum += (x = e(rng));
  for (auto& x : p) x /= sum;
  return DiagonalState::from_probs(p);
}

void BM_FastSpectrum(benchmark::State& st) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto dev = random_device(n, rng);
  const auto state = random_state(n, rng);
  const auto grid = default_window(dev, 1001);
  for (auto _ : st) benchmark::DoNotOptimize(fast_spectrum(dev, state, grid));
}
BENCHMARK(BM_FastSpectrum)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& st) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto dev = random_device(n, rng);
  const auto state = random_state(n, rng);
  const auto grid = default_window(dev, 101);
  for (auto _ : st) benchmark::DoNotOptimize(exact_spectrum(dev, state, grid));
}
BENCHMARK(BM_ExactSpectrum)->Arg(2)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_OraclePoint(benchmark::State& st) {
  const auto dev = preset_n1_2010();
  const auto state = DiagonalState::from_probs({0.5, 0.5});
  TruncationConfig trunc;
  trunc.n_max = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(evolve_to_steady(dev, state, dev.cavity_freq, trunc));
}
BENCHMARK(BM_OraclePoint)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_InferWeights(benchmark::State& st) {
  const auto dev = preset_n2_2010();
  const auto state = DiagonalState::from_probs({0.2, 0.2, 0.26, 0.34});
  const auto s = exact_spectrum(dev, state, default_window(dev, 2001));
  for (auto _ : st) benchmark::DoNotOptimize(infer_weights(s, dev));
}
BENCHMARK(BM_InferWeights)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
