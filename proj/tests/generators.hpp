#pragma once

// Seeded generators for property tests. They use std::mt19937_64, which is
// independent of the library's counter-based generator.

#include <cstdint>
#include <random>
#include <vector>

#include "coinlab/truth_table.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin() { return integer(0, 1) == 1; }
  std::uint64_t mask(int n) {
    return n == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << n) - 1)(engine_);
  }

  coinlab::TruthTable boolean_table(int n) {
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = coin() ? 1.0 : -1.0;
    return coinlab::TruthTable::boolean(n, std::move(v));
  }

  coinlab::TruthTable bounded_table(int n) {
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = real(-1.0, 1.0);
    return coinlab::TruthTable::bounded(n, std::move(v));
  }

  coinlab::Restriction restriction(int n) {
    coinlab::Restriction rho;
    for (int i = 1; i <= n; ++i) {
      const int c = integer(0, 2);
      if (c == 1) rho.fixed[i] = 1;
      if (c == 2) rho.fixed[i] = -1;
    }
    return rho;
  }

  coinlab::SignPattern signs(int n) {
    coinlab::SignPattern s = coinlab::SignPattern::identity(n);
    for (auto& v : s.input_signs) v = coin() ? -1 : 1;
    s.output_sign = coin() ? -1 : 1;
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gen
