#include <doctest.h>

#include <cmath>

#include "coinlab/coin.hpp"
#include "coinlab/function_spec.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace coinlab;

namespace {

oracle::Fn as_fn(const TruthTable& f) {
  return [f](const oracle::Point& x) { return f.at(x); };
}

}  // namespace

TEST_CASE("bias points are validated") {
  CHECK_THROWS_AS(BiasPoint(1.5), std::domain_error);
  CHECK_THROWS_AS(BiasPoint(-1.0000001), std::domain_error);
  CHECK_THROWS_AS(BiasPoint(NAN), std::domain_error);
  CHECK_NOTHROW(BiasPoint(1.0));
  CHECK_NOTHROW(BiasPoint(-1.0));
}

TEST_CASE("direct expectation examples") {
  const TruthTable maj = build_majority(3);
  CHECK(expectation_direct(maj, BiasPoint(1.0)) == 1.0);
  CHECK(expectation_direct(maj, BiasPoint(-1.0)) == -1.0);
  CHECK(expectation_direct(maj, BiasPoint(0.1)) == doctest::Approx(0.1495).epsilon(1e-14));
  const TruthTable r = build_random_bounded(5, 4);
  CHECK(expectation_direct(r, BiasPoint(0.0)) == doctest::Approx(wht_forward(r)[0]).epsilon(1e-14));
}

TEST_CASE("spectral expectation examples") {
  const LevelProfile maj = level_profile(wht_forward(build_majority(3)));
  for (double e : {-0.7, 0.1, 0.5}) {
    CHECK(expectation_spectral(maj, BiasPoint(e)) == doctest::Approx(1.5 * e - 0.5 * e * e * e).epsilon(1e-14));
  }
  CHECK(expectation_spectral(wht_forward(build_parity(5)), BiasPoint(0.5)) == 0.03125);
  CHECK(expectation_spectral(wht_forward(build_constant(4, -1)), BiasPoint(0.3)) == -1.0);
}

TEST_CASE("advantage examples") {
  const AdvantageReport thr = advantage(build_named("thr:3:2"), BiasPoint(0.5));
  CHECK(thr.advantage == doctest::Approx(0.6875).epsilon(1e-14));
  CHECK(thr.method_gap <= kMethodAgreementTol);
  CHECK(advantage(build_random_boolean(6, 1), BiasPoint(0.0)).advantage == 0.0);
  for (double e : {-0.4, 0.2, 0.9}) {
    CHECK(advantage(build_dictator(3, 1), BiasPoint(e)).advantage == doctest::Approx(std::abs(e)).epsilon(1e-14));
  }
  for (int n = 1; n <= 8; ++n) {
    for (double e : {-0.6, 0.3}) {
      CHECK(advantage(build_parity(n), BiasPoint(e)).advantage ==
            doctest::Approx(std::pow(std::abs(e), n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("optimal threshold") {
  CHECK(optimal_threshold(3, BiasPoint(0.5)) == 2);
  CHECK(optimal_threshold(1, BiasPoint(0.3)) == 1);
  CHECK(optimal_threshold(5, BiasPoint(1.0)) == 5);
  CHECK_THROWS(optimal_threshold(3, BiasPoint(0.0)));
  CHECK_THROWS(optimal_threshold(3, BiasPoint(-0.2)));
  for (int n = 1; n <= 12; ++n) {
    for (double e : {0.05, 0.2, 0.6}) {
      const int k = optimal_threshold(n, BiasPoint(e));
      CHECK(std::pow(1 + e, k) * std::pow(1 - e, n - k) >= 1.0 - 1e-12);
      if (k > 0) CHECK(std::pow(1 + e, k - 1) * std::pow(1 - e, n - k + 1) < 1.0);
    }
  }
}

TEST_CASE("bias derivative") {
  const TruthTable maj = build_majority(3);
  CHECK(bias_derivative(wht_forward(maj), BiasPoint(0.0)) == 1.5);
  CHECK(bias_derivative(wht_forward(build_parity(4)), BiasPoint(0.0)) == 0.0);
  CHECK(bias_derivative(wht_forward(maj), BiasPoint(0.2)) == doctest::Approx(1.44).epsilon(1e-14));
  const auto fn = as_fn(maj);
  CHECK(std::abs(oracle::derivative([&](double e) { return oracle::biased_expectation(fn, 3, e); }, 0.2) - 1.44) <= 1e-6);
}

TEST_CASE("restricted mixture examples") {
  CHECK(restricted_mixture_expectation(build_dictator(1, 1), 0.5, 0.2) == doctest::Approx(0.7).epsilon(1e-14));
  const TruthTable r = build_random_bounded(5, 8);
  CHECK(restricted_mixture_expectation(r, 0.0, 0.3) == doctest::Approx(expectation_direct(r, BiasPoint(0.3))).epsilon(1e-14));
  const TruthTable maj = build_majority(3);
  CHECK(std::abs(restricted_mixture_exhaustive(maj, 0.3, 0.1) - expectation_direct(maj, BiasPoint(0.4))) <= 1e-12);
  CHECK_THROWS(restricted_mixture_expectation(maj, 1.0, 0.0));
  CHECK_THROWS(restricted_mixture_expectation(maj, 0.6, 0.5));
  CHECK_NOTHROW(restricted_mixture_expectation(maj, -0.6, 0.4));
}

TEST_CASE("twice total variation matches point-by-point summation") {
  for (int n = 0; n <= 10; ++n) {
    for (double e : {0.0, 0.1, 0.5, -0.3, 1.0}) {
      CHECK(std::abs(twice_tv_product_measures(n, BiasPoint(e)) - oracle::twice_tv(n, e)) <= 1e-12);
    }
  }
}

TEST_CASE("property: both expectation methods agree with the product-measure oracle") {
  gen::Gen g(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(0, 9);
    const TruthTable f = g.coin() ? g.boolean_table(n) : g.bounded_table(n);
    const LevelProfile p = level_profile(wht_forward(f));
    const auto fn = as_fn(f);
    for (double e : {g.real(-1, 1), g.real(-1, 1), 1.0, -1.0}) {
      const double expected = oracle::biased_expectation(fn, n, e);
      CHECK(std::abs(expectation_direct(f, BiasPoint(e)) - expected) <= 1e-12);
      CHECK(std::abs(expectation_direct_serial(f, BiasPoint(e)) - expected) <= 1e-12);
      CHECK(std::abs(expectation_spectral(p, BiasPoint(e)) - expected) <= 1e-10);
    }
  }
}

TEST_CASE("property: direct and spectral agree to 1e-10 on the full grid") {
  gen::Gen g(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = g.integer(1, 16);
    const TruthTable f = g.coin() ? build_random_boolean(n, static_cast<std::uint64_t>(trial))
                                  : build_random_bounded(n, static_cast<std::uint64_t>(trial));
    const Analysis a = Analysis::of(f);
    std::vector<double> grid;
    for (int i = -9; i <= 9; ++i) grid.push_back(i / 10.0);
    for (double e : {1 / std::sqrt(n), 1.0 / n}) {
      grid.push_back(e);
      grid.push_back(-e);
    }
    for (double e : grid) CHECK(advantage(a, BiasPoint(e)).method_gap <= kMethodAgreementTol);
  }
}

TEST_CASE("property: derivative matches central differences") {
  gen::Gen g(55);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(1, 10);
    const TruthTable f = g.bounded_table(n);
    const LevelProfile p = level_profile(wht_forward(f));
    const double e = g.real(-0.9, 0.9);
    const double fd = oracle::derivative([&](double x) { return expectation_spectral(p, BiasPoint(x)); }, e);
    CHECK(std::abs(bias_derivative(p, BiasPoint(e)) - fd) <= 1e-6);
  }
}

TEST_CASE("property: restricted mixture equals the shifted-bias expectation") {
  gen::Gen g(66);
  for (int n = 0; n <= 8; ++n) {
    const TruthTable f = g.coin() ? g.boolean_table(n) : g.bounded_table(n);
    for (double e0 : {-0.5, -0.2, 0.0, 0.3, 0.7}) {
      for (double frac : {-1.0, -0.4, 0.0, 0.5, 1.0}) {
        const double e = frac * (1.0 - std::abs(e0));
        const double target = expectation_direct(f, BiasPoint(std::clamp(e0 + e, -1.0, 1.0)));
        CHECK(std::abs(restricted_mixture_expectation(f, e0, e) - target) <= 1e-10);
        CHECK(std::abs(restricted_mixture_exhaustive(f, e0, e) - target) <= 1e-10);
      }
    }
  }
}
