#include "coinlab/kernels.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace coinlab::kernels {

namespace {

// Stages with stride below this run block-local, so a whole block stays in
// cache across its low stages (2^12 doubles = 32 KiB).
constexpr std::size_t kCacheBlock = std::size_t{1} << 12;
constexpr std::int64_t kParallelThreshold = std::int64_t{1} << 14;

void check_power_of_two(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw std::invalid_argument("transform length must be a power of two");
  }
}

template <typename T>
void butterfly_range(T* a, std::size_t len, std::size_t stride_begin, std::size_t stride_end) {
  for (std::size_t h = stride_begin; h < stride_end && h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = a[j];
        const T y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

template <typename T>
void fwht_serial_impl(std::span<T> a) {
  check_power_of_two(a.size());
  butterfly_range(a.data(), a.size(), 1, a.size());
}

template <typename T>
void fwht_parallel_impl(std::span<T> a) {
  check_power_of_two(a.size());
  const std::size_t n = a.size();
  T* data = a.data();
  if (static_cast<std::int64_t>(n) < kParallelThreshold) {
    butterfly_range(data, n, 1, n);
    return;
  }
  const std::size_t block = std::min(kCacheBlock, n);
  const auto blocks = static_cast<std::int64_t>(n / block);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    butterfly_range(data + static_cast<std::size_t>(b) * block, block, 1, block);
  }
  // Upper stages: chunks of block/2 pairs never straddle a group since h >= block.
  const std::size_t chunk = block / 2;
  const auto chunks = static_cast<std::int64_t>(n / 2 / chunk);
  for (std::size_t h = block; h < n; h <<= 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::size_t q = static_cast<std::size_t>(c) * chunk;
      T* lo = data + (q / h) * 2 * h + (q % h);
      T* hi = lo + h;
      for (std::size_t k = 0; k < chunk; ++k) {
        const T x = lo[k];
        const T y = hi[k];
        lo[k] = x + y;
        hi[k] = x - y;
      }
    }
  }
}

}  // namespace

void fwht(std::span<double> a) { fwht_parallel_impl(a); }
void fwht(std::span<std::int64_t> a) { fwht_parallel_impl(a); }
void fwht_serial(std::span<double> a) { fwht_serial_impl(a); }
void fwht_serial(std::span<std::int64_t> a) { fwht_serial_impl(a); }

double popcount_weighted_sum(std::span<const double> values, std::span<const double> weight) {
  const std::size_t n = values.size();
  const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto block_count = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static) if (block_count > 1)
  for (std::int64_t b = 0; b < block_count; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t end = std::min(n, begin + kReduceBlock);
    double acc = 0.0;
    for (std::size_t m = begin; m < end; ++m) acc += values[m] * weight[std::popcount(m)];
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double popcount_weighted_sum_serial(std::span<const double> values,
                                    std::span<const double> weight) {
  double total = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) total += values[m] * weight[std::popcount(m)];
  return total;
}

}  // namespace coinlab::kernels
