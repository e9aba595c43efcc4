#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coinlab/spectrum.hpp"
#include "coinlab/truth_table.hpp"

namespace coinlab {

/// A collection T of subsets of [m], as deduplicated bitmasks.
struct SubsetFamily {
  int arity = 0;
  std::vector<std::uint64_t> members;

  // Sorts, deduplicates and range-checks the masks.
  static SubsetFamily of(int arity, std::vector<std::uint64_t> masks);
  static SubsetFamily level(int arity, int k);  // all |S| = k
  static SubsetFamily singletons(int arity);

  std::size_t size() const { return members.size(); }
};

// Independent per-point coin: +1 with probability (1 + g(x))/2, keyed on (seed, x).
TruthTable round_randomized(const TruthTable& g, std::uint64_t seed);

// |sum_{S in T} (rounded^(S) - g^(S))| from exact spectra.
double fourier_sum_deviation(const TruthTable& g, const TruthTable& rounded, const SubsetFamily& T);
double fourier_sum_deviation(const FourierSpectrum& g, const FourierSpectrum& rounded,
                             const SubsetFamily& T);

// 2 exp(-2^(m-1) eps^2 / |T|), clamped to [0, 1].
double hoeffding_tail(int m, std::size_t size_T, double eps);
// Deviation eps* at which the tail bound equals delta.
double hoeffding_deviation(int m, std::size_t size_T, double delta);

// 2^-m sum_x (sum_{S in T} chi_S(x))^2 by exhaustive integer summation.
double family_second_moment(const SubsetFamily& T);

struct ConcentrationRow {
  double eps = 0.0;
  std::size_t exceed_count = 0;
  double empirical = 0.0;   // exceed_count / trials
  double bound = 0.0;       // hoeffding_tail
  double allowed = 0.0;     // bound + 3 sqrt(bound (1-bound) / trials) + 1/trials
  bool within = true;
};

struct ConcentrationReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_deviation = 0.0;
  std::vector<ConcentrationRow> rows;
  bool all_within = true;
};

// Trial i rounds g with seed derive_seed(seed, i) and measures the deviation on T.
ConcentrationReport empirical_concentration(const TruthTable& g, const SubsetFamily& T,
                                            std::size_t trials, std::uint64_t seed,
                                            std::span<const double> eps_list);

struct RoundingExperimentConfig {
  int n = 15;
  double B = 3.0;
  std::uint64_t seed = 42;
  std::size_t closure_samples = 500;
  // Level-3 allowance; NaN selects the Hoeffding deviation at `delta`.
  double level3_allowance = std::numeric_limits<double>::quiet_NaN();
  double delta = 0.01;
  std::vector<double> eps_list{0.05, 0.1, 0.2, 0.5};
};

struct ClosureSampleRow {
  std::size_t member_id = 0;
  int arity = 0;
  double signed_level1 = 0.0;
  double l1_level1 = 0.0;
};

struct RoundingExperimentReport {
  int n = 0;
  double B = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  // Closure members (sampled; a lower bound on the class suprema).
  double l1_level1_max_observed = 0.0;
  double abs_signed_level1_max_observed = 0.0;
  double level1_target = 0.0;  // B + 1
  std::size_t level1_violations = 0;
  bool level1_ok = false;

  double l1_level3_of_majority = 0.0;
  double l1_level3_of_scaled_majority = 0.0;
  double l1_level3_of_rounded = 0.0;
  double level3_signed_deviation = 0.0;  // |W3(rounded) - W3(scaled)|
  double level3_allowance = 0.0;
  double hoeffding_allowance = 0.0;
  double proof_allowance = 0.0;  // n
  bool level3_ok = false;

  bool B_in_range = true;
  std::string warning;
  bool identity_rounding = false;  // B = sqrt(n): nothing random happens

  std::vector<std::pair<double, double>> hoeffding_predictions;  // (eps, tail), |T| = C(n,3)
  std::vector<ClosureSampleRow> per_sample;

  bool passed() const { return level1_ok && level3_ok; }
};

// Scale maj_n by B/sqrt(n), round, then sample the closure of the rounded
// function under restriction and both negations. n must be odd.
RoundingExperimentReport counterexample_experiment(const RoundingExperimentConfig& config);

}  // namespace coinlab
