// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "coinlab/kernels.hpp"
#include "coinlab/random.hpp"
#include "coinlab/spectrum.hpp"
#include "coinlab/truth_table.hpp"

namespace {

using namespace coinlab;

std::vector<double> doubles(int n) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * rng::unit(1, rng::Stream::generic, i) - 1.0;
  return v;
}

std::vector<std::int64_t> signs(int n) {
  std::vector<std::int64_t> v(std::size_t{1} << n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng::keyed(2, rng::Stream::generic, i) & 1U ? 1 : -1;
  return v;
}

template <class T>
void BM_fwht(benchmark::State& state, void (*kernel)(std::span<T>), const std::vector<T>& input) {
  for (auto _ : state) {
    auto a = input;
    kernel(std::span<T>(a));
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}

template <auto Kernel>
void BM_weighted_sum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto values = doubles(n);
  std::vector<double> weight(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) weight[static_cast<std::size_t>(k)] = 1.0 / (k + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(values, weight));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(values.size()));
}

template <auto Transform>
void BM_wht_forward(benchmark::State& state) {
  const TruthTable f = build_random_boolean(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(Transform(f).coeffs.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

void fwht_double_parallel(benchmark::State& s) {
  BM_fwht<double>(s, kernels::fwht, doubles(static_cast<int>(s.range(0))));
}
void fwht_double_serial(benchmark::State& s) {
  BM_fwht<double>(s, kernels::fwht_serial, doubles(static_cast<int>(s.range(0))));
}
void fwht_int64_parallel(benchmark::State& s) {
  BM_fwht<std::int64_t>(s, kernels::fwht, signs(static_cast<int>(s.range(0))));
}
void fwht_int64_serial(benchmark::State& s) {
  BM_fwht<std::int64_t>(s, kernels::fwht_serial, signs(static_cast<int>(s.range(0))));
}

}  // namespace

BENCHMARK(fwht_double_parallel)->DenseRange(12, 22, 5);
BENCHMARK(fwht_double_serial)->DenseRange(12, 22, 5);
BENCHMARK(fwht_int64_parallel)->DenseRange(12, 22, 5);
BENCHMARK(fwht_int64_serial)->DenseRange(12, 22, 5);
BENCHMARK(BM_weighted_sum<coinlab::kernels::popcount_weighted_sum>)->Name("popcount_weighted_sum_parallel")->DenseRange(12, 22, 5);
BENCHMARK(BM_weighted_sum<coinlab::kernels::popcount_weighted_sum_serial>)->Name("popcount_weighted_sum_serial")->DenseRange(12, 22, 5);
BENCHMARK(BM_wht_forward<coinlab::wht_forward>)->Name("wht_forward_parallel")->DenseRange(12, 22, 5);
BENCHMARK(BM_wht_forward<coinlab::wht_forward_serial>)->Name("wht_forward_serial")->DenseRange(12, 22, 5);

BENCHMARK_MAIN();
