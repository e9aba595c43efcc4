// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "coinlab/bounds.hpp"
#include "coinlab/classes.hpp"
#include "coinlab/coin.hpp"
#include "coinlab/random.hpp"
#include "coinlab/rounding.hpp"
#include "coinlab/spectrum.hpp"
#include "coinlab/truth_table.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace coinlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Value of f at the +-1 point x, index built from the bit convention.
double at(const TruthTable& f, const oracle::Point& x) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == -1) m |= std::size_t{1} << i;
  }
  return f[m];
}

TruthTable table_from_id(int n, std::uint64_t id) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t m = 0; m < v.size(); ++m) v[m] = ((id >> m) & 1U) ? 1.0 : -1.0;
  return TruthTable::boolean(n, std::move(v));
}

Outcome transform() {
  gen::Gen g(1001);
  double worst = 0.0, parseval = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(0, 12);
    const TruthTable f = g.coin() ? g.boolean_table(n) : g.bounded_table(n);
    const FourierSpectrum s = wht_forward(f);
    const auto points = oracle::cube(n);
    const oracle::Fn fn = [&](const oracle::Point& x) { return at(f, x); };
    std::vector<std::uint64_t> masks;
    if (n <= 8) {
      for (std::uint64_t m = 0; m < s.coeffs.size(); ++m) masks.push_back(m);
    } else {
      for (int k = 0; k < 96; ++k) masks.push_back(g.mask(n));
    }
    for (std::uint64_t m : masks) {
      double c = 0.0;
      for (const auto& x : points) {
        double chi = 1.0;
        for (int i = 0; i < n; ++i) {
          if ((m >> i) & 1U) chi *= x[static_cast<std::size_t>(i)];
        }
        c += fn(x) * chi;
      }
      c /= static_cast<double>(points.size());
      worst = std::max(worst, std::abs(c - s[m]));
    }
    double sq = 0.0, energy = 0.0;
    for (double c : s.coeffs) sq += c * c;
    for (double v : f.values()) energy += v * v;
    parseval = std::max(parseval, std::abs(sq - energy / static_cast<double>(f.size())));
  }
  return {worst <= 1e-12 && parseval <= 1e-9,
          "max coefficient error " + fmt("%.3g", worst) + ", max Parseval gap " + fmt("%.3g", parseval)};
}

Outcome expectations() {
  gen::Gen g(2002);
  double worst = 0.0;
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(-1.0 + 0.1 * k);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(0, 16);
    TruthTable f = trial % 3 == 0 ? g.boolean_table(n) : g.bounded_table(n);
    if (trial % 10 == 9 && n % 2 == 1) f = build_majority(n);
    const FourierSpectrum s = wht_forward(f);
    const LevelProfile p = level_profile(s);
    for (double e : grid) {
      const BiasPoint b(std::clamp(e, -1.0, 1.0));
      worst = std::max(worst, std::abs(expectation_direct(f, b) - expectation_spectral(p, b)));
    }
  }
  return {worst <= 1e-10, "100 functions x 21 eps, max |direct - spectral| " + fmt("%.3g", worst)};
}

Outcome prop1_exhaustive() {
  std::size_t checks = 0, violations = 0;
  for (int n : {3, 4}) {
    const double r = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> grid;
    for (int k = 1; k <= 8; ++k) {
      grid.push_back(k * r / 8.0);
      grid.push_back(-k * r / 8.0);
    }
    const std::uint64_t count = std::uint64_t{1} << (1U << n);
    for (std::uint64_t id = 0; id < count; ++id) {
      const LevelProfile p = level_profile(wht_forward(table_from_id(n, id)));
      for (double e : grid) {
        const auto [stated, sharp] = check_prop1_variance(p, e);
        checks += 2;
        violations += stated.violated() + sharp.violated();
        if (std::abs(e) <= r / 2.0 + 1e-15) {
          ++checks;
          violations += check_prop1_maxlevel(p, e).violated();
        }
      }
    }
  }
  return {violations == 0, std::to_string(checks) + " checks on 256 + 65536 functions, " +
                               std::to_string(violations) + " violations"};
}

Outcome optimal() {
  bool ok = true;
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    for (double e : {0.1, 0.3, 0.5}) {
      const OptimalDistinguisher d = optimal_distinguisher(n, e);
      const double tv = oracle::twice_tv(n, e);
      worst = std::max({worst, std::abs(d.brute_force_max - d.threshold_advantage), std::abs(d.brute_force_max - tv)});
      ok = ok && !check_optimal_distinguisher(n, e).violated();
    }
  }
  const OptimalDistinguisher d = optimal_distinguisher(3, 0.5);
  ok = ok && worst <= 1e-12 && d.threshold_k == 2 && std::abs(d.brute_force_max - 0.6875) <= 1e-12;
  return {ok, "max gap " + fmt("%.3g", worst) + "; n=3 eps=0.5: " + fmt("%.10g", d.brute_force_max) +
                  " with k=" + std::to_string(d.threshold_k)};
}

Outcome tal() {
  gen::Gen g(5005);
  double worst = 0.0;
  for (int n = 0; n <= 8; ++n) {
    const TruthTable f = n % 2 ? g.bounded_table(n) : g.boolean_table(n);
    for (double e0 : {-0.6, -0.2, 0.0, 0.3, 0.7}) {
      for (double frac : {-1.0, -0.5, 0.0, 0.25, 1.0}) {
        const double e = frac * (1.0 - std::abs(e0));
        const double exact = expectation_direct(f, BiasPoint(std::clamp(e0 + e, -1.0, 1.0)));
        worst = std::max({worst, std::abs(restricted_mixture_exhaustive(f, e0, e) - exact),
                          std::abs(restricted_mixture_expectation(f, e0, e) - exact)});
      }
    }
  }
  std::size_t checks = 0, violations = 0;
  for (int n : {3, 5, 7, 9}) {
    const std::vector<TruthTable> base{build_majority(n)};
    const FunctionClass c = closure_enumerate(base, {.restriction = true});
    for (int k = 1; k <= 9; ++k) {
      const double e = 0.1 * k;
      for (double s : {e, -e}) {
        const auto a = check_tal_lemma(c, s);
        const auto b = check_derivative_bound(c, s);
        checks += a.members.size() + b.members.size();
        violations += a.violations + b.violations;
      }
    }
  }
  return {worst <= 1e-10 && violations == 0, "mixture gap " + fmt("%.3g", worst) + "; " + std::to_string(checks) +
                                                 " member checks, " + std::to_string(violations) + " violations"};
}

double auto_B(const LevelProfile& p, double eps0) {
  double B = 0.0;
  for (double m : improve_hypothesis_grid(eps0)) {
    for (double e : {m, -m}) B = std::max(B, std::abs(expectation_spectral(p, BiasPoint(e)) - p.signed_sum(0)) / m);
  }
  return B;
}

Outcome corollaries() {
  std::vector<TruthTable> family;
  for (std::uint64_t id = 0; id < 256; ++id) family.push_back(table_from_id(3, id));
  for (int n = 1; n <= 15; ++n) {
    if (n % 2) family.push_back(build_majority(n));
    family.push_back(build_parity(n));
    for (int k : {1, (n + 1) / 2, n}) family.push_back(build_threshold(n, k));
  }
  std::size_t checks = 0, violations = 0, hypothesis = 0;
  for (const TruthTable& f : family) {
    const LevelProfile p = level_profile(wht_forward(f));
    const double r = 1.0 / std::sqrt(static_cast<double>(f.arity()));
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      for (double e : {frac * r, -frac * r}) {
        for (const auto& rep : check_cor_l1coinsmalleps(p, e)) {
          ++checks;
          violations += rep.violated();
        }
      }
    }
    const double eps0 = 0.5 * r;
    const double B = auto_B(p, eps0);
    for (double frac : {0.25, 0.5, 0.75, 0.99}) {
      for (double e : {frac * eps0, -frac * eps0}) {
        for (const auto& rep : check_cor_improve(p, B, eps0, e)) {
          ++checks;
          violations += rep.violated();
          hypothesis += rep.status == BoundStatus::hypothesis_failed;
        }
      }
    }
  }
  return {violations == 0 && hypothesis == 0, std::to_string(family.size()) + " functions, " + std::to_string(checks) +
                                                  " checks, " + std::to_string(violations) + " violations"};
}

Outcome robp() {
  const double recipe = steinberger_level1_recipe(16, 3, 17, 1.0 / 16.0);
  const int r = robp_recipe_r(16);
  const ClassBoundResult res = check_robp_level1(16, 3, 100, 7);
  double max_l1 = 0.0;
  for (const auto& m : res.members) max_l1 = std::max(max_l1, m.lhs);
  const bool ok = std::abs(recipe - 18.01) < 0.005 && r == 17 && res.members.size() == 100 && res.violations == 0 &&
                  max_l1 < recipe;
  return {ok, "recipe " + fmt("%.6g", recipe) + " (r=" + std::to_string(r) + "); max L1^1 over 100 ROBPs " +
                  fmt("%.6g", max_l1)};
}

Outcome rounding_lemma() {
  bool exact = true;
  for (int m = 1; m <= 10; ++m) {
    std::vector<SubsetFamily> fams{SubsetFamily::singletons(m), SubsetFamily::level(m, std::min(m, 3))};
    gen::Gen g(static_cast<std::uint64_t>(800 + m));
    std::vector<std::uint64_t> masks;
    for (int k = 0; k < 12; ++k) masks.push_back(g.mask(m));
    fams.push_back(SubsetFamily::of(m, masks));
    for (const auto& T : fams) {
      // Independent count: sum_x (sum_S chi_S(x))^2 over the cube.
      long long total = 0;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
        long long s = 0;
        for (std::uint64_t S : T.members) s += (std::popcount(x & S) % 2) ? -1 : 1;
        total += s * s;
      }
      const double direct = static_cast<double>(total) / static_cast<double>(std::uint64_t{1} << m);
      exact = exact && direct == static_cast<double>(T.size()) && family_second_moment(T) == direct;
    }
  }
  const std::vector<double> eps{0.05, 0.1, 0.2, 0.5};
  bool within = true;
  std::string worst;
  const std::vector<std::pair<TruthTable, SubsetFamily>> cases{
      {scale(build_constant(10, 1), 0.0), SubsetFamily::singletons(10)},
      {scale(build_majority(9), 0.0), SubsetFamily::level(9, 1)},
      {build_random_bounded(10, 11), SubsetFamily::level(10, 2)},
      {scale(build_parity(10), 0.5), SubsetFamily::level(10, 3)},
  };
  for (const auto& [g, T] : cases) {
    const ConcentrationReport rep = empirical_concentration(g, T, 2000, 99, eps);
    within = within && rep.all_within;
  }
  return {exact && within, std::string("variance identity ") + (exact ? "exact" : "broken") +
                               " for m <= 10; tails " + (within ? "within" : "exceed") + " Hoeffding + 3 sigma"};
}

Outcome experiment() {
  std::size_t pass = 0;
  double worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RoundingExperimentConfig cfg;
    cfg.seed = seed;
    cfg.level3_allowance = 0.4;
    const RoundingExperimentReport r = counterexample_experiment(cfg);
    const double gap = r.l1_level3_of_scaled_majority - r.l1_level3_of_rounded;
    worst_gap = std::max(worst_gap, gap);
    pass += r.level1_violations == 0 && r.per_sample.size() == 500 && gap <= 0.4;
  }
  return {pass >= 95, std::to_string(pass) + "/100 seeds pass; worst L1^3 shortfall " + fmt("%.4g", worst_gap)};
}

Outcome growth() {
  double lo = 1e300, hi = 0.0;
  for (int n = 7; n <= 17; n += 2) {
    const double v = level_profile(wht_forward(build_majority(n))).l1(3) / std::pow(n, 1.5);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double spread = (hi - lo) / hi;
  return {spread < 0.25, "L1^3/n^1.5 in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], spread " +
                             fmt("%.3f", spread)};
}

}  // namespace

int main() {
  criterion(1, 10, transform);
  criterion(2, 60, expectations);
  criterion(3, 120, prop1_exhaustive);
  criterion(4, 0, optimal);
  criterion(5, 120, tal);
  criterion(6, 0, corollaries);
  criterion(7, 120, robp);
  criterion(8, 0, rounding_lemma);
  criterion(9, 300, experiment);
  criterion(10, 0, growth);
  return failures == 0 ? 0 : 1;
}
