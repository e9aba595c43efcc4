#pragma once

// Reference computations written directly from definitions, without the
// library's kernels, index helpers or spectra.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Point = std::vector<int>;  // x_1..x_n as +-1

// Enumerates {-1,1}^n in table order: bit i-1 of the counter set <=> x_i = -1.
inline std::vector<Point> cube(int n) {
  std::vector<Point> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    Point x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = ((m >> i) & 1U) ? -1 : 1;
    out.push_back(std::move(x));
  }
  return out;
}

using Fn = std::function<double(const Point&)>;

inline double coefficient(const Fn& f, int n, const std::vector<int>& subset) {
  double acc = 0.0;
  const auto points = cube(n);
  for (const auto& x : points) {
    double chi = 1.0;
    for (int i : subset) chi *= x[static_cast<std::size_t>(i - 1)];
    acc += f(x) * chi;
  }
  return acc / static_cast<double>(points.size());
}

// E f under independent coins with P[x_i = 1] = (1 + eps)/2.
inline double biased_expectation(const Fn& f, int n, double eps) {
  double acc = 0.0;
  for (const auto& x : cube(n)) {
    double p = 1.0;
    for (int xi : x) p *= (1.0 + eps * xi) / 2.0;
    acc += p * f(x);
  }
  return acc;
}

// 2 TV between the eps-biased and uniform product measures, point by point.
inline double twice_tv(int n, double eps) {
  double acc = 0.0;
  for (const auto& x : cube(n)) {
    double p = 1.0;
    for (int xi : x) p *= (1.0 + eps * xi) / 2.0;
    acc += std::abs(p - std::ldexp(1.0, -n));
  }
  return acc;
}

inline double majority(const Point& x) {
  int s = 0;
  for (int xi : x) s += xi;
  return s > 0 ? 1.0 : -1.0;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Closed-form level-k L1 mass of majority on odd n: each |S| = k (odd)
// coefficient has magnitude C((n-1)/2, (k-1)/2) / C(n-1, k-1) * C(n-1, (n-1)/2) 2^(1-n).
inline double majority_level_l1(int n, int k) {
  if (k % 2 == 0) return 0.0;
  const double c = binomial((n - 1) / 2, (k - 1) / 2) / binomial(n - 1, k - 1) *
                   binomial(n - 1, (n - 1) / 2) * std::ldexp(1.0, 1 - n);
  return binomial(n, k) * c;
}

// Central difference of a scalar function.
inline double derivative(const std::function<double(double)>& g, double x, double h = 1e-6) {
  return (g(x + h) - g(x - h)) / (2.0 * h);
}

}  // namespace oracle
