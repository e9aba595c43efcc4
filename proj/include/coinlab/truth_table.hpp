#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace coinlab {

inline constexpr int kMaxArity = 26;

enum class TableKind { boolean, bounded };

/// Dense table of f : {-1,1}^n -> [-1,1].
///
/// Index convention: bit (i-1) of the index is 1 iff x_i = -1, so index 0 is
/// the all-(+1) point. Boolean tables hold exactly +1.0 / -1.0; bounded
/// tables hold arbitrary doubles in [-1, 1]. Arity 0 is legal (one value).
class TruthTable {
 public:
  TruthTable() : TruthTable(0, TableKind::boolean, {1.0}) {}

  // Validating constructors; throw std::invalid_argument on a bad length or
  // out-of-range value.
  static TruthTable boolean(int arity, std::vector<double> values);
  static TruthTable bounded(int arity, std::vector<double> values);
  // Boolean if every value is exactly +-1, bounded otherwise.
  static TruthTable infer(int arity, std::vector<double> values);

  int arity() const { return arity_; }
  std::size_t size() const { return values_.size(); }
  TableKind kind() const { return kind_; }
  bool is_boolean() const { return kind_ == TableKind::boolean; }

  double operator[](std::size_t index) const { return values_[index]; }
  std::span<const double> values() const { return values_; }

  // f(x) for a +-1 input vector of length arity().
  double at(std::span<const int> x) const;

  // Canonical bytes (arity + raw value bytes); equal keys <=> identical tables.
  std::string canonical_key() const;

  bool operator==(const TruthTable& other) const {
    return arity_ == other.arity_ && values_ == other.values_;
  }

 private:
  TruthTable(int arity, TableKind kind, std::vector<double> values)
      : arity_(arity), kind_(kind), values_(std::move(values)) {}

  int arity_;
  TableKind kind_;
  std::vector<double> values_;
};

std::size_t index_of(std::span<const int> x);
std::vector<int> decode_index(std::size_t index, int arity);
void check_arity(int arity);

/// Partial assignment: variable index (1-based) -> fixed value +-1.
struct Restriction {
  std::map<int, int> fixed;

  int free_count(int arity) const { return arity - static_cast<int>(fixed.size()); }
};

/// Input sign flips sigma and output sign tau: g(z) = tau * f(z_1 s_1, ..., z_n s_n).
struct SignPattern {
  std::vector<int> input_signs;
  int output_sign = 1;

  static SignPattern identity(int arity) {
    return {std::vector<int>(static_cast<std::size_t>(arity), 1), 1};
  }
};

TruthTable build_threshold(int n, int k);
TruthTable build_majority(int n);
TruthTable build_parity(int n);
TruthTable build_dictator(int n, int variable);
TruthTable build_constant(int n, int value);
// OR of ANDs: +1 iff some block of `width` consecutive variables is all +1.
TruthTable build_tribes(int width, int n);
TruthTable build_random_boolean(int n, std::uint64_t seed);
TruthTable build_random_bounded(int n, std::uint64_t seed);

TruthTable restrict(const TruthTable& f, const Restriction& rho);
TruthTable apply_signs(const TruthTable& f, const SignPattern& s);
// restrict(apply_signs(f, s), rho) in one O(2^m) pass.
TruthTable restrict_signed(const TruthTable& f, const SignPattern& s, const Restriction& rho);
TruthTable scale(const TruthTable& f, double c);

}  // namespace coinlab
