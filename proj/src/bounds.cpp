#include "coinlab/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "coinlab/coin.hpp"
#include "coinlab/format.hpp"
#include "coinlab/random.hpp"
#include "coinlab/robp.hpp"

namespace coinlab {

namespace {

// Range preconditions are checked with a little slack so grid points
// computed as 1/sqrt(n) are accepted.
constexpr double kRangeSlack = 1e-12;

// Delta(eps) = E f(coins_eps) - E f(coins_0) = sum_{k>=1} W_k eps^k.
double coin_gap(const LevelProfile& p, double eps) {
  double acc = 0.0;
  const auto& w = p.signed_sum_by_level;
  for (std::size_t k = w.size(); k-- > 1;) acc = (acc + w[k]) * eps;
  return acc;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

void require_proof_range(double eps, double limit, const char* what) {
  if (!(std::abs(eps) <= limit + kRangeSlack)) {
    throw std::domain_error(std::string("eps outside the range of ") + what);
  }
}

std::vector<LevelProfile> member_profiles(const FunctionClass& c) {
  std::vector<LevelProfile> out(c.members.size());
  const auto count = static_cast<std::int64_t>(c.members.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = level_profile(wht_forward(c.members[idx]));
  }
  return out;
}

void require_restriction_closure(const FunctionClass& c) {
  if (!c.flags.restriction || c.mode != ClassMode::enumerate) {
    throw std::invalid_argument("check needs an enumerated restriction-closed class");
  }
  if (c.members.empty()) throw std::invalid_argument("class has no members");
}

ClassBoundResult aggregate(std::string id, std::vector<std::pair<std::string, double>> params,
                           std::vector<BoundReport> members) {
  ClassBoundResult result;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].violated()) ++result.violations;
    if (members[i].margin < members[worst].margin) worst = i;
  }
  const BoundReport& w = members.at(worst);
  result.aggregate = BoundReport::check(std::move(id), std::move(params), w.lhs, w.rhs, w.tolerance);
  result.aggregate.witness = "member " + std::to_string(worst);
  result.aggregate.note = std::to_string(members.size()) + " members, " +
                          std::to_string(result.violations) + " violations";
  result.members = std::move(members);
  return result;
}

}  // namespace

std::string_view to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::holds: return "holds";
    case BoundStatus::violated: return "violated";
    case BoundStatus::hypothesis_failed: return "hypothesis_failed";
    case BoundStatus::precondition_failed: return "precondition_failed";
  }
  return "unknown";
}

BoundReport BoundReport::check(std::string id, std::vector<std::pair<std::string, double>> params,
                               double lhs, double rhs, double tolerance) {
  BoundReport r;
  r.bound_id = std::move(id);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = tolerance;
  r.holds = r.margin >= -tolerance;
  r.status = r.holds ? BoundStatus::holds : BoundStatus::violated;
  return r;
}

BoundReport BoundReport::unchecked(std::string id, std::vector<std::pair<std::string, double>> params,
                                   BoundStatus status, std::string note) {
  BoundReport r;
  r.bound_id = std::move(id);
  r.params = std::move(params);
  r.status = status;
  r.holds = false;
  r.lhs = r.rhs = r.margin = std::nan("");
  r.note = std::move(note);
  return r;
}

std::string BoundReport::params_string() const {
  std::string out;
  for (const auto& [key, value] : params) {
    if (!out.empty()) out += ';';
    out += key + '=' + fmt_num(value);
  }
  return out;
}

double residual(const LevelProfile& profile, double eps) {
  if (eps == 0.0) throw std::domain_error("residual undefined at eps = 0");
  const auto& w = profile.signed_sum_by_level;
  double acc = 0.0;
  for (std::size_t k = w.size(); k-- > 2;) acc = acc * eps + w[k];
  return std::abs(acc * eps);
}

std::pair<BoundReport, BoundReport> check_prop1_variance(const LevelProfile& profile, double eps) {
  const int n = profile.arity();
  if (eps == 0.0) throw std::domain_error("eps must be non-zero");
  require_proof_range(eps, 1.0 / std::sqrt(static_cast<double>(n)), "the variance bound (1/sqrt n)");
  const double a = std::abs(eps);
  const double lhs = residual(profile, eps);
  const double variance = std::max(0.0, profile.variance);

  BoundReport stated = BoundReport::check("prop1_variance", {{"n", n}, {"eps", eps}}, lhs,
                                          a * n * std::sqrt(variance));

  double moment = 0.0;  // sum_{k>=2} C(n,k) eps^(2k)
  for (int k = 2; k <= n; ++k) moment += binomial(n, k) * std::pow(a, 2 * k);
  const double high_weight = std::max(0.0, profile.variance - profile.weight(1));
  BoundReport sharper = BoundReport::check("prop1_variance_sharp", {{"n", n}, {"eps", eps}}, lhs,
                                           std::sqrt(moment) * std::sqrt(high_weight) / a);
  return {std::move(stated), std::move(sharper)};
}

BoundReport check_prop1_maxlevel(const LevelProfile& profile, double eps) {
  const int n = profile.arity();
  if (eps == 0.0) throw std::domain_error("eps must be non-zero");
  require_proof_range(eps, 0.5 / std::sqrt(static_cast<double>(n)), "the max-level bound (1/(2 sqrt n))");
  double max_weight = 0.0;
  for (int k = 2; k <= n; ++k) max_weight = std::max(max_weight, profile.weight(k));
  return BoundReport::check("prop1_maxlevel", {{"n", n}, {"eps", eps}}, residual(profile, eps),
                            2.0 * std::abs(eps) * n * std::sqrt(max_weight));
}

BoundReport check_cor_nonneg(const FourierSpectrum& spectrum, std::span<const double> eps_grid) {
  const int n = spectrum.arity;
  for (int i = 0; i < n; ++i) {
    const double c = spectrum[std::uint64_t{1} << i];
    if (c < -1e-12) {
      return BoundReport::unchecked("cor22_nonneg", {{"n", n}, {"variable", i + 1}, {"coefficient", c}},
                                    BoundStatus::precondition_failed,
                                    "negative level-1 coefficient");
    }
  }
  const LevelProfile profile = level_profile(spectrum);
  const double limit = 1.0 / std::sqrt(static_cast<double>(n));
  double best = std::numeric_limits<double>::infinity();
  double best_eps = 0.0;
  for (double eps : eps_grid) {
    if (eps == 0.0 || std::abs(eps) > limit + kRangeSlack) continue;
    const double value = std::abs(coin_gap(profile, eps) / eps) + std::abs(eps) * n;
    if (value < best) {
      best = value;
      best_eps = eps;
    }
  }
  if (!std::isfinite(best)) throw std::domain_error("no grid point with 0 < |eps| <= 1/sqrt(n)");
  return BoundReport::check("cor22_nonneg", {{"n", n}, {"eps", best_eps}}, profile.l1(1), best);
}

std::vector<BoundReport> check_cor_l1coinsmalleps(const LevelProfile& profile, double eps) {
  const int n = profile.arity();
  require_proof_range(eps, 1.0 / std::sqrt(static_cast<double>(n)), "the small-eps coin bound (1/sqrt n)");
  const double t = std::abs(profile.signed_sum(1));
  const double a = std::abs(eps);
  const double lhs = std::abs(coin_gap(profile, eps));
  std::vector<BoundReport> out;
  out.push_back(BoundReport::check("cor25_l1coin", {{"n", n}, {"eps", eps}, {"t", t}}, lhs, a * (t + a * n)));
  if (t > 0.0 && a <= t / n) {
    out.push_back(BoundReport::check("cor25_stated", {{"n", n}, {"eps", eps}, {"t", t}}, lhs, 2.0 * t * a));
  }
  return out;
}

std::vector<double> improve_hypothesis_grid(double eps0) {
  constexpr int kPoints = 50;
  std::vector<double> grid;
  const double lo = std::log(eps0);
  for (int i = 0; i < kPoints; ++i) grid.push_back(std::exp(lo * (1.0 - static_cast<double>(i) / (kPoints - 1))));
  grid.back() = 1.0;
  return grid;
}

std::vector<BoundReport> check_cor_improve(const LevelProfile& profile, double B, double eps0,
                                           double eps) {
  const int n = profile.arity();
  if (!(B >= 0.0)) throw std::domain_error("B must be non-negative");
  if (!(eps0 > 0.0)) throw std::domain_error("eps0 must be positive");
  require_proof_range(eps0, 1.0 / std::sqrt(static_cast<double>(n)), "eps0 (1/sqrt n)");
  if (!(std::abs(eps) < eps0)) throw std::domain_error("conclusion applies to |eps| < eps0");

  const std::vector<std::pair<std::string, double>> params{{"n", n}, {"B", B}, {"eps0", eps0}, {"eps", eps}};
  for (double magnitude : improve_hypothesis_grid(eps0)) {
    for (double e : {magnitude, -magnitude}) {
      const double gap = std::abs(coin_gap(profile, e));
      if (gap > magnitude * B + kBoundTolerance) {
        return {BoundReport::unchecked("cor24_improve", params, BoundStatus::hypothesis_failed,
                                       "hypothesis |Delta(e)| <= |e| B fails at e=" + fmt_num(e) +
                                           " (grid of 50 log-spaced points)")};
      }
    }
  }
  const double a = std::abs(eps);
  const double lhs = std::abs(coin_gap(profile, eps));
  std::vector<BoundReport> out;
  out.push_back(BoundReport::check("cor24_improve", params, lhs, a * (B + n * (a + eps0))));
  out.push_back(BoundReport::check("cor24_improve_weak", params, lhs, a * (B + 2.0 * n * eps0)));
  for (auto& r : out) r.note = "hypothesis checked on 50 log-spaced points";
  return out;
}

ClassBoundResult check_tal_lemma(const FunctionClass& c, double eps) {
  require_restriction_closure(c);
  if (!(std::abs(eps) < 1.0)) throw std::domain_error("Tal bound needs |eps| < 1");
  const double t = class_stats(c, {}).sup_abs_signed_level1.value;
  const double rhs = -std::log1p(-std::abs(eps)) * t;
  const auto profiles = member_profiles(c);
  std::vector<BoundReport> members;
  members.reserve(profiles.size());
  for (const auto& p : profiles) {
    members.push_back(BoundReport::check("tal_lemma", {{"eps", eps}, {"t", t}}, std::abs(coin_gap(p, eps)), rhs));
  }
  return aggregate("tal_lemma", {{"eps", eps}, {"t", t}}, std::move(members));
}

ClassBoundResult check_derivative_bound(const FunctionClass& c, double eps0) {
  require_restriction_closure(c);
  if (!(std::abs(eps0) < 1.0)) throw std::domain_error("derivative bound needs |eps0| < 1");
  const double t = class_stats(c, {}).sup_abs_signed_level1.value;
  const double rhs = t / (1.0 - std::abs(eps0));
  const auto profiles = member_profiles(c);
  std::vector<BoundReport> members;
  members.reserve(profiles.size());
  for (const auto& p : profiles) {
    members.push_back(BoundReport::check("tal_derivative", {{"eps0", eps0}, {"t", t}},
                                         std::abs(bias_derivative(p, BiasPoint(eps0))), rhs));
  }
  return aggregate("tal_derivative", {{"eps0", eps0}, {"t", t}}, std::move(members));
}

namespace {

void check_steinberger_domain(int n, int w, int r, double eps) {
  if (n < 0 || w < 2 || r < 1 || !(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("Steinberger bound needs n >= 0, w >= 2, r >= 1, 0 < eps < 1");
  }
}

double steinberger_tail(int n, int w, int r, double eps) {
  const double rw = std::pow(static_cast<double>(r), w - 2);
  return (n + rw) * (w - 2) * std::pow(1.0 / (2.0 - eps), r - 1);
}

}  // namespace

double steinberger_bound(int n, int w, int r, double eps) {
  check_steinberger_domain(n, w, r, eps);
  return eps * std::pow(static_cast<double>(r), w - 2) + steinberger_tail(n, w, r, eps);
}

double steinberger_level1_recipe(int n, int w, int r, double eps) {
  check_steinberger_domain(n, w, r, eps);
  return std::pow(static_cast<double>(r), w - 2) + steinberger_tail(n, w, r, eps) / eps + eps * n;
}

int robp_recipe_r(int n, double log_base) {
  if (n < 1 || !(log_base > 1.0)) throw std::domain_error("recipe r needs n >= 1 and log base > 1");
  const double log_n = log_base == 2.0 ? std::log2(n) : std::log(n) / std::log(log_base);
  return static_cast<int>(std::ceil(4.0 * log_n - 1e-12)) + 1;
}

ClassBoundResult check_robp_level1(int n, int w, std::size_t sample_count, std::uint64_t seed,
                                   double log_base) {
  if (n < 2 || n > 20) throw std::out_of_range("ROBP level-1 check supports 2 <= n <= 20");
  if (sample_count < 1) throw std::invalid_argument("need at least one sample");
  const double eps = 1.0 / n;
  const int r = robp_recipe_r(n, log_base);
  const double rhs = steinberger_level1_recipe(n, w, r, eps);
  std::vector<double> l1(sample_count);
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(sample_count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < count; ++s) {
    try {
      const auto program = random_robp(n, w, rng::derive_seed(seed, static_cast<std::uint64_t>(s)));
      l1[static_cast<std::size_t>(s)] = level_profile(wht_forward(robp_to_table(program))).l1(1);
    } catch (...) {
#pragma omp critical(coinlab_robp_level1)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  const std::vector<std::pair<std::string, double>> params{
      {"n", n}, {"w", w}, {"r", r}, {"eps", eps}, {"seed", static_cast<double>(seed)}};
  std::vector<BoundReport> members;
  for (std::size_t s = 0; s < sample_count; ++s) {
    members.push_back(BoundReport::check("robp_level1", params, l1[s], rhs));
    members.back().witness = "robp sample " + std::to_string(s);
  }
  auto result = aggregate("robp_level1", params, std::move(members));
  result.aggregate.note += "; recipe omits the hidden O_w constants";
  return result;
}

OptimalDistinguisher optimal_distinguisher(int n, double eps) {
  if (n < 1 || n > 4) throw std::out_of_range("brute-force distinguisher supports 1 <= n <= 4");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("distinguisher needs 0 < eps <= 1");
  const std::size_t points = std::size_t{1} << n;
  std::vector<double> diff(points);
  for (std::size_t m = 0; m < points; ++m) {
    const int minus = std::popcount(m);
    diff[m] = std::pow((1.0 + eps) / 2.0, n - minus) * std::pow((1.0 - eps) / 2.0, minus) -
              std::ldexp(1.0, -n);
  }
  OptimalDistinguisher out;
  out.brute_force_max = -1.0;
  const std::uint64_t functions = std::uint64_t{1} << points;
  for (std::uint64_t id = 0; id < functions; ++id) {
    double gap = 0.0;
    for (std::size_t m = 0; m < points; ++m) gap += ((id >> m) & 1U) ? diff[m] : -diff[m];
    if (std::abs(gap) > out.brute_force_max) {
      out.brute_force_max = std::abs(gap);
      out.best_function = id;
    }
  }
  const BiasPoint b(eps);
  out.threshold_k = optimal_threshold(n, b);
  out.threshold_advantage = advantage(build_threshold(n, out.threshold_k), b).advantage;
  out.twice_tv = twice_tv_product_measures(n, b);
  return out;
}

BoundReport check_optimal_distinguisher(int n, double eps) {
  const OptimalDistinguisher d = optimal_distinguisher(n, eps);
  const double gap = std::max(std::abs(d.brute_force_max - d.threshold_advantage),
                              std::abs(d.brute_force_max - d.twice_tv));
  BoundReport r = BoundReport::check(
      "optimal_distinguisher",
      {{"n", n}, {"eps", eps}, {"k", d.threshold_k}, {"max_advantage", d.brute_force_max}, {"twice_tv", d.twice_tv}},
      gap, 0.0, 1e-12);
  r.witness = "thr:" + std::to_string(n) + ":" + std::to_string(d.threshold_k);
  r.note = "lhs = max deviation of brute-force max from threshold advantage and 2*TV";
  return r;
}

}  // namespace coinlab
