#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coinlab/classes.hpp"
#include "coinlab/spectrum.hpp"

namespace coinlab {

inline constexpr double kBoundTolerance = 1e-9;

enum class BoundStatus {
  holds,
  violated,
  // The checker's hypothesis does not hold for this input; nothing was concluded.
  hypothesis_failed,
  precondition_failed,
};
std::string_view to_string(BoundStatus s);

/// One inequality lhs <= rhs, checked with an absolute tolerance on the margin.
struct BoundReport {
  std::string bound_id;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double tolerance = kBoundTolerance;
  bool holds = true;
  BoundStatus status = BoundStatus::holds;
  std::string witness;
  std::string note;

  // Builds a checked report: margin, holds and status follow from lhs/rhs.
  static BoundReport check(std::string id, std::vector<std::pair<std::string, double>> params,
                           double lhs, double rhs, double tolerance = kBoundTolerance);
  // Report that did not reach the inequality (hypothesis or precondition failed).
  static BoundReport unchecked(std::string id, std::vector<std::pair<std::string, double>> params,
                               BoundStatus status, std::string note);

  bool violated() const { return status == BoundStatus::violated; }
  std::string params_string() const;  // "n=3;eps=0.1"
};

/// Per-member reports plus their conjunction.
struct ClassBoundResult {
  BoundReport aggregate;
  std::vector<BoundReport> members;
  std::size_t violations = 0;
};

// |(1/eps)(E f(coins_eps) - E f(coins_0)) - sum_i f^({i})| = |sum_{k>=2} W_k eps^(k-1)|.
double residual(const LevelProfile& profile, double eps);

// Stated bound |eps| n sqrt(Var) and the sharper Cauchy-Schwarz intermediate
// (1/|eps|) sqrt(sum_{k>=2} C(n,k) eps^2k) sqrt(Var - sum_i f^({i})^2).
// Needs 0 < |eps| <= 1/sqrt(n).
std::pair<BoundReport, BoundReport> check_prop1_variance(const LevelProfile& profile, double eps);
// 2 |eps| n sqrt(max_{k>=2} level-k weight); needs 0 < |eps| <= 1/(2 sqrt(n)).
BoundReport check_prop1_maxlevel(const LevelProfile& profile, double eps);

// L1^1(f) <= min over grid points with 0 < |eps| <= 1/sqrt(n) of
// |Delta(eps)/eps| + |eps| n. Requires every f^({i}) >= 0.
BoundReport check_cor_nonneg(const FourierSpectrum& spectrum, std::span<const double> eps_grid);

// |Delta(eps)| <= |eps| (t + |eps| n) with t = |sum_i f^({i})|, |eps| <= 1/sqrt(n).
// A second "cor25_stated" report (2 t |eps|) is appended when |eps| <= t/n.
std::vector<BoundReport> check_cor_l1coinsmalleps(const LevelProfile& profile, double eps);

// Hypothesis |Delta(e)| <= |e| B on 50 log-spaced |e| in [eps0, 1] (both
// signs); conclusion |Delta(eps)| <= |eps| (B + n(|eps| + eps0)) for
// |eps| < eps0, plus the weaker |eps| (B + 2 n eps0). A failed hypothesis
// yields a single hypothesis_failed report.
std::vector<BoundReport> check_cor_improve(const LevelProfile& profile, double B, double eps0,
                                           double eps);
std::vector<double> improve_hypothesis_grid(double eps0);

// |Delta(eps)| <= ln(1/(1-|eps|)) t for every member, t = class sup |sum_i f^({i})|.
ClassBoundResult check_tal_lemma(const FunctionClass& c, double eps);
// |g'(eps0)| <= t / (1 - |eps0|) for every member.
ClassBoundResult check_derivative_bound(const FunctionClass& c, double eps0);

double steinberger_bound(int n, int w, int r, double eps);
// r^(w-2) + (1/eps)(n + r^(w-2))(w-2)(1/(2-eps))^(r-1) + eps n
double steinberger_level1_recipe(int n, int w, int r, double eps);
// ceil(4 log_base n) + 1
int robp_recipe_r(int n, double log_base = 2.0);

// Seeded random width-w ROBPs on n variables; exact L1^1 of each against the
// level-1 recipe at eps = 1/n, r = robp_recipe_r(n, log_base).
ClassBoundResult check_robp_level1(int n, int w, std::size_t sample_count, std::uint64_t seed,
                                   double log_base = 2.0);

struct OptimalDistinguisher {
  double brute_force_max = 0.0;
  std::uint64_t best_function = 0;  // bit m of the id = 1 <=> f(m) = +1
  int threshold_k = 0;
  double threshold_advantage = 0.0;
  double twice_tv = 0.0;
};
OptimalDistinguisher optimal_distinguisher(int n, double eps);
// Brute force over all 2^(2^n) Boolean functions (n <= 4) against the
// threshold function and twice the total-variation distance (1e-12).
BoundReport check_optimal_distinguisher(int n, double eps);

}  // namespace coinlab
