#include "coinlab/coin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "coinlab/kernels.hpp"

namespace coinlab {

namespace {

// Weight of any single point with k coordinates equal to -1.
std::vector<double> point_weights(int n, double eps) {
  const double plus = (1.0 + eps) / 2.0;
  const double minus = (1.0 - eps) / 2.0;
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) w[static_cast<std::size_t>(k)] = std::pow(plus, n - k) * std::pow(minus, k);
  return w;
}

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void check_mixture_range(double eps0, double eps) {
  if (!(std::abs(eps0) < 1.0)) throw std::domain_error("restriction bias eps0 must satisfy |eps0| < 1");
  if (!(std::abs(eps) <= 1.0 - std::abs(eps0) + 1e-15)) {
    throw std::domain_error("bias eps must lie in [|eps0| - 1, 1 - |eps0|]");
  }
}

}  // namespace

BiasPoint::BiasPoint(double eps) : eps_(eps) {
  if (!std::isfinite(eps) || std::abs(eps) > 1.0) {
    throw std::domain_error("bias must lie in [-1, 1]");
  }
}

std::string_view to_string(Method m) { return m == Method::direct ? "direct" : "spectral"; }

double expectation_direct(const TruthTable& f, BiasPoint b) {
  const auto w = point_weights(f.arity(), b.eps());
  return kernels::popcount_weighted_sum(f.values(), w);
}

double expectation_direct_serial(const TruthTable& f, BiasPoint b) {
  const auto w = point_weights(f.arity(), b.eps());
  return kernels::popcount_weighted_sum_serial(f.values(), w);
}

double expectation_spectral(const LevelProfile& profile, BiasPoint b) {
  return horner(profile.signed_sum_by_level, b.eps());
}

double expectation_spectral(const FourierSpectrum& spectrum, BiasPoint b) {
  return expectation_spectral(level_profile(spectrum), b);
}

AdvantageReport advantage(const Analysis& a, BiasPoint b) {
  AdvantageReport r;
  r.eps = b.eps();
  r.method = Method::direct;
  r.expectation_biased = expectation_direct(a.table, b);
  r.expectation_uniform = expectation_direct(a.table, BiasPoint(0.0));
  const double spectral_biased = expectation_spectral(a.profile, b);
  const double spectral_uniform = a.profile.signed_sum(0);
  r.method_gap = std::abs(r.expectation_biased - spectral_biased);
  const double uniform_gap = std::abs(r.expectation_uniform - spectral_uniform);
  if (!(r.method_gap <= kMethodAgreementTol && uniform_gap <= kMethodAgreementTol)) {
    throw NumericalFault("direct and spectral expectations disagree at eps=" + std::to_string(b.eps()));
  }
  r.advantage = std::abs(r.expectation_biased - r.expectation_uniform);
  return r;
}

AdvantageReport advantage(const TruthTable& f, BiasPoint b) { return advantage(Analysis::of(f), b); }

int optimal_threshold(int n, BiasPoint b) {
  const double eps = b.eps();
  if (!(eps > 0.0)) throw std::domain_error("optimal threshold needs eps > 0");
  if (n < 0) throw std::invalid_argument("arity must be non-negative");
  if (eps == 1.0) return n;  // only the all-(+1) point has positive mass
  const double up = std::log1p(eps);
  const double down = std::log1p(-eps);
  for (int k = 0; k <= n; ++k) {
    const double log_ratio = k * up + (n - k) * down;
    if (log_ratio >= -1e-14 * (n + 1)) return k;
  }
  return n;  // unreachable: k = n gives n*log(1+eps) > 0
}

double bias_derivative(const LevelProfile& profile, BiasPoint b) {
  const auto& w = profile.signed_sum_by_level;
  std::vector<double> derivative;
  for (std::size_t k = 1; k < w.size(); ++k) derivative.push_back(static_cast<double>(k) * w[k]);
  return horner(derivative, b.eps());
}

double bias_derivative(const FourierSpectrum& spectrum, BiasPoint b) {
  return bias_derivative(level_profile(spectrum), b);
}

double restricted_mixture_expectation(const TruthTable& f, double eps0, double eps) {
  check_mixture_range(eps0, eps);
  const double fix = std::abs(eps0);
  const double delta = eps / (1.0 - fix);
  const double p_plus = (eps0 > 0 ? fix : 0.0) + (1.0 - fix) * (1.0 + delta) / 2.0;
  const double p_minus = (eps0 < 0 ? fix : 0.0) + (1.0 - fix) * (1.0 - delta) / 2.0;

  // Fold out the highest variable each round: its bit splits the table in halves.
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t half = v.size() / 2; half >= 1; half /= 2) {
    for (std::size_t j = 0; j < half; ++j) v[j] = p_plus * v[j] + p_minus * v[j + half];
    v.resize(half);
  }
  const double mixture = v.front();

  const double target = expectation_direct(f, BiasPoint(std::clamp(eps0 + eps, -1.0, 1.0)));
  if (!(std::abs(mixture - target) <= kMethodAgreementTol)) {
    throw NumericalFault("restriction mixture disagrees with shifted-bias expectation");
  }
  return mixture;
}

double restricted_mixture_exhaustive(const TruthTable& f, double eps0, double eps) {
  check_mixture_range(eps0, eps);
  const int n = f.arity();
  if (n > 16) throw std::invalid_argument("exhaustive mixture limited to n <= 16");
  const double fix = std::abs(eps0);
  const int sign = eps0 < 0 ? -1 : 1;
  const BiasPoint inner(std::clamp(eps / (1.0 - fix), -1.0, 1.0));
  double total = 0.0;
  for (std::uint64_t fixed_set = 0; fixed_set < (std::uint64_t{1} << n); ++fixed_set) {
    const int fixed_count = std::popcount(fixed_set);
    const double prob = std::pow(fix, fixed_count) * std::pow(1.0 - fix, n - fixed_count);
    if (prob == 0.0) continue;
    Restriction rho;
    for (int i = 0; i < n; ++i) {
      if ((fixed_set >> i) & 1U) rho.fixed[i + 1] = sign;
    }
    total += prob * expectation_direct(restrict(f, rho), inner);
  }
  return total;
}

double twice_tv_product_measures(int n, BiasPoint b) {
  const double p = (1.0 + b.eps()) / 2.0;
  const double q = 1.0 - p;
  const double uniform = std::ldexp(1.0, -n);
  double binom = 1.0;  // C(n, k)
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    total += binom * std::abs(std::pow(p, k) * std::pow(q, n - k) - uniform);
    binom = binom * (n - k) / (k + 1);
  }
  return total;
}

}  // namespace coinlab
