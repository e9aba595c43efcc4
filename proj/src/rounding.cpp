#include "coinlab/rounding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "coinlab/classes.hpp"
#include "coinlab/random.hpp"

namespace coinlab {

SubsetFamily SubsetFamily::of(int arity, std::vector<std::uint64_t> masks) {
  check_arity(arity);
  std::ranges::sort(masks);
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  if (!masks.empty() && masks.back() >= (std::uint64_t{1} << arity)) {
    throw std::out_of_range("subset mask outside 2^m");
  }
  return {arity, std::move(masks)};
}

SubsetFamily SubsetFamily::level(int arity, int k) {
  check_arity(arity);
  std::vector<std::uint64_t> masks;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << arity); ++s) {
    if (std::popcount(s) == k) masks.push_back(s);
  }
  return {arity, std::move(masks)};
}

SubsetFamily SubsetFamily::singletons(int arity) { return level(arity, 1); }

TruthTable round_randomized(const TruthTable& g, std::uint64_t seed) {
  std::vector<double> values(g.size());
  const auto count = static_cast<std::int64_t>(g.size());
#pragma omp parallel for schedule(static) if (count >= (1 << 16))
  for (std::int64_t i = 0; i < count; ++i) {
    const auto x = static_cast<std::uint64_t>(i);
    const double p_plus = (1.0 + g[x]) / 2.0;
    values[x] = rng::unit(seed, rng::Stream::rounding, x) < p_plus ? 1.0 : -1.0;
  }
  return TruthTable::boolean(g.arity(), std::move(values));
}

double fourier_sum_deviation(const FourierSpectrum& g, const FourierSpectrum& rounded,
                             const SubsetFamily& T) {
  if (g.arity != rounded.arity || g.arity != T.arity) {
    throw std::invalid_argument("arity mismatch between functions and subset family");
  }
  double total = 0.0;
  for (std::uint64_t s : T.members) total += rounded[s] - g[s];
  return std::abs(total);
}

double fourier_sum_deviation(const TruthTable& g, const TruthTable& rounded, const SubsetFamily& T) {
  if (g.arity() != rounded.arity() || g.arity() != T.arity) {
    throw std::invalid_argument("arity mismatch between functions and subset family");
  }
  return fourier_sum_deviation(wht_forward(g), wht_forward(rounded), T);
}

double hoeffding_tail(int m, std::size_t size_T, double eps) {
  if (m < 0 || size_T < 1 || !(eps > 0.0)) {
    throw std::domain_error("Hoeffding tail needs m >= 0, |T| >= 1, eps > 0");
  }
  const double exponent = std::ldexp(1.0, m - 1) * eps * eps / static_cast<double>(size_T);
  return std::min(1.0, 2.0 * std::exp(-exponent));
}

double hoeffding_deviation(int m, std::size_t size_T, double delta) {
  if (m < 0 || size_T < 1 || !(delta > 0.0 && delta < 2.0)) {
    throw std::domain_error("Hoeffding deviation needs m >= 0, |T| >= 1, 0 < delta < 2");
  }
  return std::sqrt(static_cast<double>(size_T) * std::log(2.0 / delta) / std::ldexp(1.0, m - 1));
}

double family_second_moment(const SubsetFamily& T) {
  if (T.arity > 20) throw std::out_of_range("exhaustive second moment limited to m <= 20");
  const std::uint64_t points = std::uint64_t{1} << T.arity;
  unsigned __int128 total = 0;
  for (std::uint64_t x = 0; x < points; ++x) {
    std::int64_t c = 0;
    for (std::uint64_t s : T.members) c += (std::popcount(x & s) % 2 == 0) ? 1 : -1;
    total += static_cast<unsigned __int128>(c * c);
  }
  return static_cast<double>(total) / static_cast<double>(points);
}

ConcentrationReport empirical_concentration(const TruthTable& g, const SubsetFamily& T,
                                            std::size_t trials, std::uint64_t seed,
                                            std::span<const double> eps_list) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (T.size() < 1) throw std::invalid_argument("subset family is empty");
  const FourierSpectrum base = wht_forward(g);
  std::vector<double> deviation(trials);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto trial_seed = rng::derive_seed(seed, static_cast<std::uint64_t>(i));
    deviation[static_cast<std::size_t>(i)] =
        fourier_sum_deviation(base, wht_forward(round_randomized(g, trial_seed)), T);
  }

  ConcentrationReport report;
  report.trials = trials;
  report.seed = seed;
  report.max_deviation = *std::ranges::max_element(deviation);
  const double n_trials = static_cast<double>(trials);
  for (double eps : eps_list) {
    ConcentrationRow row;
    row.eps = eps;
    row.exceed_count = static_cast<std::size_t>(std::ranges::count_if(deviation, [eps](double d) { return d >= eps; }));
    row.empirical = static_cast<double>(row.exceed_count) / n_trials;
    row.bound = hoeffding_tail(g.arity(), T.size(), eps);
    row.allowed = row.bound + 3.0 * std::sqrt(row.bound * (1.0 - row.bound) / n_trials) + 1.0 / n_trials;
    row.within = row.empirical <= row.allowed;
    report.all_within = report.all_within && row.within;
    report.rows.push_back(row);
  }
  return report;
}

RoundingExperimentReport counterexample_experiment(const RoundingExperimentConfig& config) {
  const int n = config.n;
  check_arity(n);
  if (n % 2 == 0) throw std::invalid_argument("counterexample needs an odd n");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(config.B > 0.0) || config.B > root_n * (1.0 + 1e-9)) {
    throw std::domain_error("B must lie in (0, sqrt(n)]");
  }

  RoundingExperimentReport report;
  report.n = n;
  report.B = config.B;
  report.seed = config.seed;
  report.samples = config.closure_samples;

  const double lower = std::sqrt(std::log2(static_cast<double>(n))) + 2.0;
  report.B_in_range = config.B >= lower;
  if (!report.B_in_range) {
    report.warning = "B below sqrt(log2 n) + 2 = " + std::to_string(lower) +
                     "; asymptotic union bound not in force at this size";
  }

  // Scale factors within 1e-6 of 1 (e.g. B typed as a rounded sqrt(n)) are
  // treated as exactly 1.
  double factor = config.B / root_n;
  if (std::abs(factor - 1.0) <= 1e-6) factor = 1.0;
  report.identity_rounding = factor == 1.0;

  const TruthTable majority = build_majority(n);
  const TruthTable scaled = scale(majority, factor);
  const TruthTable rounded = round_randomized(scaled, config.seed);

  const LevelProfile majority_profile = level_profile(wht_forward(majority));
  const FourierSpectrum scaled_spectrum = wht_forward(scaled);
  const FourierSpectrum rounded_spectrum = wht_forward(rounded);
  const SubsetFamily level3 = SubsetFamily::level(n, 3);

  report.l1_level3_of_majority = majority_profile.l1(3);
  report.l1_level3_of_scaled_majority = level_profile(scaled_spectrum).l1(3);
  report.l1_level3_of_rounded = level_profile(rounded_spectrum).l1(3);
  report.level3_signed_deviation = fourier_sum_deviation(scaled_spectrum, rounded_spectrum, level3);
  report.proof_allowance = n;
  if (level3.size() > 0) {
    report.hoeffding_allowance = hoeffding_deviation(n, level3.size(), config.delta);
    for (double eps : config.eps_list) {
      report.hoeffding_predictions.emplace_back(eps, hoeffding_tail(n, level3.size(), eps));
    }
  }
  report.level3_allowance =
      std::isnan(config.level3_allowance) ? report.hoeffding_allowance : config.level3_allowance;
  report.level3_ok =
      report.l1_level3_of_rounded >= report.l1_level3_of_scaled_majority - report.level3_allowance;

  report.level1_target = config.B + 1.0;
  if (config.closure_samples > 0) {
    const std::vector<TruthTable> base{rounded};
    const FunctionClass sample =
        closure_sample(base, ClosureFlags{true, true, true}, config.closure_samples, config.seed);
    report.per_sample.resize(sample.members.size());
    const auto count = static_cast<std::int64_t>(sample.members.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const LevelProfile p = level_profile(wht_forward(sample.members[idx]));
      report.per_sample[idx] = {idx, sample.members[idx].arity(), p.signed_sum(1), p.l1(1)};
    }
  }
  for (const auto& row : report.per_sample) {
    report.l1_level1_max_observed = std::max(report.l1_level1_max_observed, row.l1_level1);
    report.abs_signed_level1_max_observed =
        std::max(report.abs_signed_level1_max_observed, std::abs(row.signed_level1));
    if (std::abs(row.signed_level1) > report.level1_target + 1e-12) ++report.level1_violations;
  }
  report.level1_ok = report.level1_violations == 0;
  return report;
}

}  // namespace coinlab
