#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coinlab/truth_table.hpp"

namespace coinlab {

/// All 2^n Fourier coefficients; entry S (bit i-1 set <=> i in S) is
/// f^(S) = E_x[f(x) prod_{i in S} x_i].
struct FourierSpectrum {
  int arity = 0;
  std::vector<double> coeffs;
  // True when computed on the integer path (every coeffs[S] * 2^n is an integer).
  bool exact = false;

  double operator[](std::uint64_t mask) const { return coeffs[mask]; }
};

/// Per-level aggregates, indexed by level k = 0..n.
struct LevelProfile {
  std::vector<double> l1_by_level;           // sum_{|S|=k} |f^(S)|
  std::vector<double> signed_sum_by_level;   // W_k = sum_{|S|=k} f^(S)
  std::vector<double> weight_by_level;       // sum_{|S|=k} f^(S)^2
  double total_influence = 0.0;
  double variance = 0.0;

  int arity() const { return static_cast<int>(l1_by_level.size()) - 1; }
  // Zero for levels above the arity, so class-wide comparisons can mix arities.
  double l1(int k) const;
  double signed_sum(int k) const;
  double weight(int k) const;
};

// Fast transform; Boolean tables go through 64-bit integers and a single
// final division by 2^n.
FourierSpectrum wht_forward(const TruthTable& f);
// Same contract on the serial reference kernels.
FourierSpectrum wht_forward_serial(const TruthTable& f);

// Direct O(2^n) summation for one coefficient. Oracle only.
double naive_coefficient(const TruthTable& f, std::uint64_t mask);

LevelProfile level_profile(const FourierSpectrum& spectrum);

// Sum_S f^(S) chi_S(x) for every x. Values within 1e-9 of [-1, 1] are clamped;
// anything further out is rejected.
TruthTable wht_inverse(const FourierSpectrum& spectrum);

/// A table with its spectrum and level profile computed once.
struct Analysis {
  TruthTable table;
  FourierSpectrum spectrum;
  LevelProfile profile;

  static Analysis of(TruthTable f);
};

// "{1,3}" for mask 0b101; "{}" for the empty set.
std::string subset_string(std::uint64_t mask);

// CSV: mask,subset,level,coefficient
void write_spectrum_csv(std::ostream& out, const FourierSpectrum& spectrum);
// CSV: level,l1,signed_sum,weight
void write_profile_csv(std::ostream& out, const LevelProfile& profile);

}  // namespace coinlab
