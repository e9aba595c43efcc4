#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coinlab/truth_table.hpp"

namespace coinlab {

struct ClosureFlags {
  bool restriction = false;
  bool input_negation = false;
  bool output_negation = false;

  std::string to_string() const;
  bool operator==(const ClosureFlags&) const = default;
};

enum class ClassMode { enumerate, sample };

/// How a member was derived: g = restrict(apply_signs(base[base_index], signs), rho).
struct MemberOrigin {
  std::size_t base_index = 0;
  SignPattern signs;
  Restriction rho;

  // e.g. "base=0 sigma=+-+ tau=+ rho=*+-" ('*' marks a free variable).
  std::string describe(int base_arity) const;
};

struct FunctionClass {
  std::vector<TruthTable> base;
  ClosureFlags flags;
  ClassMode mode = ClassMode::enumerate;
  std::vector<TruthTable> members;
  std::vector<MemberOrigin> origins;  // parallel to members
  // Sign patterns were skipped (sign flips do not change any L1^k).
  bool signs_skipped = false;
  std::uint64_t seed = 0;
};

/// Enumeration would exceed the member cap; use closure_sample instead.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMemberCap = 1'000'000;

// Every restriction (3^n patterns) of every sign variant (2^n input patterns,
// 2 output signs) allowed by flags, deduplicated by canonical bytes, in
// first-seen order. With skip_sign_patterns only the identity sign pattern is
// used, which leaves every L1^k supremum unchanged.
FunctionClass closure_enumerate(std::span<const TruthTable> base, ClosureFlags flags,
                                std::size_t cap = kDefaultMemberCap,
                                bool skip_sign_patterns = false);

// `count` seeded draws: uniform base member; each coordinate fixed to -1,
// fixed to +1 or left free with probability 1/3 each; uniform signs where
// flagged.
FunctionClass closure_sample(std::span<const TruthTable> base, ClosureFlags flags,
                             std::size_t count, std::uint64_t seed, bool dedup = false);

struct SupWitness {
  double value = 0.0;
  std::size_t member = 0;
};

struct ClassStats {
  std::vector<SupWitness> sup_l1_by_level;  // index = level
  SupWitness sup_abs_signed_level1;         // t = sup |sum_i f^({i})|
  std::vector<double> eps_grid;
  std::vector<SupWitness> sup_advantage;    // parallel to eps_grid
  // Enumerate mode: exact suprema. Sample mode: sampled lower bounds.
  bool exact = true;
  std::size_t member_count = 0;

  double sup_l1(int k) const;
};

// Per-member spectra are computed in parallel; ties go to the lowest member
// index, so results do not depend on scheduling.
ClassStats class_stats(const FunctionClass& c, std::span<const double> eps_grid);

// Per-member statistics used by class_stats and the CSV export.
struct MemberStats {
  int arity = 0;
  std::vector<double> l1_by_level;
  double signed_level1 = 0.0;
  std::vector<double> advantage;  // parallel to the eps grid
};
std::vector<MemberStats> member_stats(const FunctionClass& c, std::span<const double> eps_grid);

}  // namespace coinlab
