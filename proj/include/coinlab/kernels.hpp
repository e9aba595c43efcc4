#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with the same contract; tests compare the two and bench/ times
// them. All parallel kernels are deterministic: results do not depend on the
// thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace coinlab::kernels {

// Unnormalized Walsh-Hadamard butterfly, in place: a[S] <- sum_m a[m] (-1)^{|m & S|}.
// Size must be a power of two (1 is allowed).
void fwht(std::span<double> a);
void fwht(std::span<std::int64_t> a);
void fwht_serial(std::span<double> a);
void fwht_serial(std::span<std::int64_t> a);

// Sum of values[m] * weight[popcount(m)]. The parallel version sums fixed-size
// blocks and then adds the block partials in order, so its rounding is
// identical for every thread count (but may differ from the serial loop in
// the last bits).
double popcount_weighted_sum(std::span<const double> values, std::span<const double> weight);
double popcount_weighted_sum_serial(std::span<const double> values,
                                    std::span<const double> weight);

// Block size of the deterministic reductions.
inline constexpr std::size_t kReduceBlock = 4096;

}  // namespace coinlab::kernels
