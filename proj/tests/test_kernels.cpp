#include <doctest.h>

#include <omp.h>

#include <bit>
#include <vector>

#include "coinlab/kernels.hpp"
#include "generators.hpp"

using namespace coinlab;

namespace {

std::vector<double> naive_transform(const std::vector<double>& a) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t m = 0; m < a.size(); ++m) out[s] += (std::popcount(m & s) % 2 ? -a[m] : a[m]);
  }
  return out;
}

}  // namespace

TEST_CASE("butterfly matches the quadratic definition") {
  gen::Gen g(7);
  for (int n = 0; n <= 9; ++n) {
    std::vector<double> a(std::size_t{1} << n);
    for (auto& v : a) v = g.real(-1, 1);
    const auto expected = naive_transform(a);
    std::vector<double> fast = a, slow = a;
    kernels::fwht(fast);
    kernels::fwht_serial(slow);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(fast[i] == doctest::Approx(expected[i]).epsilon(1e-12));
      CHECK(slow[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("butterfly rejects sizes that are not powers of two") {
  std::vector<double> a(6);
  CHECK_THROWS(kernels::fwht(std::span<double>(a)));
  CHECK_THROWS(kernels::fwht_serial(std::span<double>(a)));
}

TEST_CASE("parallel butterfly is bit-identical to the serial reference at every thread count") {
  gen::Gen g(8);
  for (int n : {12, 15, 17}) {
    std::vector<double> a(std::size_t{1} << n);
    std::vector<std::int64_t> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = g.real(-1, 1);
      b[i] = g.coin() ? 1 : -1;
    }
    std::vector<double> ref = a;
    std::vector<std::int64_t> ref_int = b;
    kernels::fwht_serial(std::span<double>(ref));
    kernels::fwht_serial(std::span<std::int64_t>(ref_int));
    for (int threads : {1, 2, 3, 4}) {
      omp_set_num_threads(threads);
      std::vector<double> x = a;
      std::vector<std::int64_t> y = b;
      kernels::fwht(std::span<double>(x));
      kernels::fwht(std::span<std::int64_t>(y));
      CHECK(x == ref);
      CHECK(y == ref_int);
    }
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("weighted popcount sums") {
  gen::Gen g(9);
  for (int n : {0, 3, 10, 16}) {
    std::vector<double> v(std::size_t{1} << n), w(static_cast<std::size_t>(n) + 1);
    for (auto& x : v) x = g.real(-1, 1);
    for (auto& x : w) x = g.real(0, 1);
    long double exact = 0;
    for (std::size_t m = 0; m < v.size(); ++m) exact += static_cast<long double>(v[m]) * w[static_cast<std::size_t>(std::popcount(m))];
    const double serial = kernels::popcount_weighted_sum_serial(v, w);
    CHECK(serial == doctest::Approx(static_cast<double>(exact)).epsilon(1e-12));
    omp_set_num_threads(1);
    const double one = kernels::popcount_weighted_sum(v, w);
    for (int threads : {2, 3, 4}) {
      omp_set_num_threads(threads);
      CHECK(kernels::popcount_weighted_sum(v, w) == one);
    }
    CHECK(one == doctest::Approx(serial).epsilon(1e-12));
  }
  omp_set_num_threads(omp_get_num_procs());
}
