#pragma once

#include <stdexcept>
#include <string_view>

#include "coinlab/spectrum.hpp"
#include "coinlab/truth_table.hpp"

namespace coinlab {

/// Coordinate bias: each input is +1 with probability (1+eps)/2.
class BiasPoint {
 public:
  // Throws std::domain_error when |eps| > 1 or eps is not finite.
  explicit BiasPoint(double eps);
  double eps() const { return eps_; }

 private:
  double eps_;
};

enum class Method { direct, spectral };
std::string_view to_string(Method m);

struct AdvantageReport {
  double eps = 0.0;
  double expectation_biased = 0.0;
  double expectation_uniform = 0.0;
  double advantage = 0.0;
  Method method = Method::direct;
  // |direct - spectral| on the biased expectation.
  double method_gap = 0.0;
};

/// Raised when two independent routes to the same quantity disagree.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMethodAgreementTol = 1e-10;

// E f(coins_eps) by full weighted summation over the cube.
double expectation_direct(const TruthTable& f, BiasPoint b);
// Same, on the serial reference kernel.
double expectation_direct_serial(const TruthTable& f, BiasPoint b);
// sum_k W_k eps^k from the level profile.
double expectation_spectral(const LevelProfile& profile, BiasPoint b);
double expectation_spectral(const FourierSpectrum& spectrum, BiasPoint b);

// Both methods; throws NumericalFault if they differ by more than 1e-10.
AdvantageReport advantage(const TruthTable& f, BiasPoint b);
AdvantageReport advantage(const Analysis& a, BiasPoint b);

// Smallest k with (1+eps)^k (1-eps)^(n-k) >= 1; eps must be > 0.
int optimal_threshold(int n, BiasPoint b);

// d/d eps of E f(coins_eps): sum_{k>=1} k W_k eps^(k-1).
double bias_derivative(const LevelProfile& profile, BiasPoint b);
double bias_derivative(const FourierSpectrum& spectrum, BiasPoint b);

/// E over rho ~ D_{eps0} of E f|_rho(coins_{eps/(1-|eps0|)}), where D_{eps0}
/// fixes each coordinate to sign(eps0) with probability |eps0| and leaves it
/// free otherwise. Evaluated by folding out one coordinate at a time and
/// cross-checked against expectation_direct at eps0 + eps (NumericalFault on
/// disagreement beyond 1e-10). Requires |eps0| < 1 and |eps| <= 1 - |eps0|.
double restricted_mixture_expectation(const TruthTable& f, double eps0, double eps);

// The same mixture by enumerating all 2^n fixed/free patterns, restricting f
// and averaging the restricted expectations. Oracle; n <= 16.
double restricted_mixture_exhaustive(const TruthTable& f, double eps0, double eps);

// 2 * TV between the eps-biased and uniform product measures on n coins,
// computed from binomial weights on the count of +1s.
double twice_tv_product_measures(int n, BiasPoint b);

}  // namespace coinlab
