#include "coinlab/classes.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <unordered_set>

#include "coinlab/coin.hpp"
#include "coinlab/random.hpp"
#include "coinlab/spectrum.hpp"

namespace coinlab {

namespace {

class MemberSink {
 public:
  MemberSink(FunctionClass& c, bool dedup) : c_(c), dedup_(dedup) {}

  void add(TruthTable g, MemberOrigin origin) {
    if (dedup_ && !seen_.insert(g.canonical_key()).second) return;
    c_.members.push_back(std::move(g));
    c_.origins.push_back(std::move(origin));
  }

 private:
  FunctionClass& c_;
  bool dedup_;
  std::unordered_set<std::string> seen_;
};

std::vector<SignPattern> sign_variants(int n, bool inputs, bool output) {
  std::vector<SignPattern> out;
  const std::uint64_t input_patterns = inputs ? (std::uint64_t{1} << n) : 1;
  for (int tau : {1, -1}) {
    if (tau == -1 && !output) break;
    for (std::uint64_t mask = 0; mask < input_patterns; ++mask) {
      SignPattern s = SignPattern::identity(n);
      s.output_sign = tau;
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) s.input_signs[static_cast<std::size_t>(i)] = -1;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Pattern p in base 3, digit i: 0 = free, 1 = fixed +1, 2 = fixed -1.
Restriction restriction_from_ternary(int n, std::uint64_t p) {
  Restriction rho;
  for (int i = 0; i < n; ++i, p /= 3) {
    if (p % 3 == 1) rho.fixed[i + 1] = 1;
    if (p % 3 == 2) rho.fixed[i + 1] = -1;
  }
  return rho;
}

char sign_char(int s) { return s > 0 ? '+' : '-'; }

}  // namespace

std::string ClosureFlags::to_string() const {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += '+';
    out += name;
  };
  if (restriction) add("restriction");
  if (input_negation) add("input_negation");
  if (output_negation) add("output_negation");
  return out.empty() ? "none" : out;
}

std::string MemberOrigin::describe(int base_arity) const {
  std::string sigma, rho_text;
  for (int i = 1; i <= base_arity; ++i) {
    const auto idx = static_cast<std::size_t>(i - 1);
    sigma += idx < signs.input_signs.size() ? sign_char(signs.input_signs[idx]) : '+';
    const auto it = rho.fixed.find(i);
    rho_text += it == rho.fixed.end() ? '*' : sign_char(it->second);
  }
  return "base=" + std::to_string(base_index) + " sigma=" + sigma +
         " tau=" + sign_char(signs.output_sign) + " rho=" + rho_text;
}

double ClassStats::sup_l1(int k) const {
  return k >= 0 && k < static_cast<int>(sup_l1_by_level.size())
             ? sup_l1_by_level[static_cast<std::size_t>(k)].value
             : 0.0;
}

FunctionClass closure_enumerate(std::span<const TruthTable> base, ClosureFlags flags,
                                std::size_t cap, bool skip_sign_patterns) {
  const bool inputs = flags.input_negation && !skip_sign_patterns;
  const bool output = flags.output_negation && !skip_sign_patterns;
  double estimate = 0.0;
  for (const auto& f : base) {
    const double n = f.arity();
    estimate += (flags.restriction ? std::pow(3.0, n) : 1.0) * (inputs ? std::pow(2.0, n) : 1.0) *
                (output ? 2.0 : 1.0);
  }
  if (estimate > static_cast<double>(cap)) {
    throw CapExceeded("closure enumeration needs up to " + std::to_string(static_cast<long double>(estimate)) +
                      " members, above the cap of " + std::to_string(cap) + "; use sampling mode");
  }

  FunctionClass c;
  c.base.assign(base.begin(), base.end());
  c.flags = flags;
  c.mode = ClassMode::enumerate;
  c.signs_skipped = skip_sign_patterns && (flags.input_negation || flags.output_negation);
  MemberSink sink(c, true);
  for (std::size_t b = 0; b < base.size(); ++b) {
    const TruthTable& f = base[b];
    const int n = f.arity();
    std::uint64_t patterns = 1;
    if (flags.restriction) {
      for (int i = 0; i < n; ++i) patterns *= 3;
    }
    for (const SignPattern& s : sign_variants(n, inputs, output)) {
      for (std::uint64_t p = 0; p < patterns; ++p) {
        Restriction rho = restriction_from_ternary(n, p);
        TruthTable g = restrict_signed(f, s, rho);
        sink.add(std::move(g), MemberOrigin{b, s, std::move(rho)});
      }
    }
  }
  return c;
}

FunctionClass closure_sample(std::span<const TruthTable> base, ClosureFlags flags,
                             std::size_t count, std::uint64_t seed, bool dedup) {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  if (base.empty()) throw std::invalid_argument("class needs at least one base function");
  FunctionClass c;
  c.base.assign(base.begin(), base.end());
  c.flags = flags;
  c.mode = ClassMode::sample;
  c.seed = seed;
  MemberSink sink(c, dedup);
  rng::CounterStream draw(seed, rng::Stream::closure_sample);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t b = draw.below(base.size());
    const int n = base[b].arity();
    MemberOrigin origin{b, SignPattern::identity(n), {}};
    if (flags.restriction) {
      for (int i = 1; i <= n; ++i) {
        const auto choice = draw.below(3);
        if (choice == 1) origin.rho.fixed[i] = 1;
        if (choice == 2) origin.rho.fixed[i] = -1;
      }
    }
    if (flags.input_negation) {
      for (int& s : origin.signs.input_signs) s = (draw.next_u64() >> 63) ? -1 : 1;
    }
    if (flags.output_negation) origin.signs.output_sign = (draw.next_u64() >> 63) ? -1 : 1;
    TruthTable g = restrict_signed(base[b], origin.signs, origin.rho);
    sink.add(std::move(g), std::move(origin));
  }
  return c;
}

std::vector<MemberStats> member_stats(const FunctionClass& c, std::span<const double> eps_grid) {
  std::vector<BiasPoint> grid;
  for (double e : eps_grid) grid.emplace_back(e);
  std::vector<MemberStats> out(c.members.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(c.members.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      const Analysis a = Analysis::of(c.members[static_cast<std::size_t>(i)]);
      MemberStats& s = out[static_cast<std::size_t>(i)];
      s.arity = a.table.arity();
      s.l1_by_level = a.profile.l1_by_level;
      s.signed_level1 = a.profile.signed_sum(1);
      for (const BiasPoint& b : grid) s.advantage.push_back(advantage(a, b).advantage);
    } catch (...) {
#pragma omp critical(coinlab_member_stats)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

ClassStats class_stats(const FunctionClass& c, std::span<const double> eps_grid) {
  if (c.members.empty()) throw std::invalid_argument("class has no members");
  const auto per_member = member_stats(c, eps_grid);

  ClassStats stats;
  stats.exact = c.mode == ClassMode::enumerate;
  stats.member_count = c.members.size();
  stats.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  constexpr double kUnset = -std::numeric_limits<double>::infinity();
  int max_arity = 0;
  for (const auto& s : per_member) max_arity = std::max(max_arity, s.arity);
  stats.sup_l1_by_level.assign(static_cast<std::size_t>(max_arity) + 1, SupWitness{kUnset, 0});
  stats.sup_abs_signed_level1 = {kUnset, 0};
  stats.sup_advantage.assign(eps_grid.size(), SupWitness{kUnset, 0});

  auto raise = [](SupWitness& w, double value, std::size_t member) {
    if (value > w.value) w = {value, member};
  };
  for (std::size_t i = 0; i < per_member.size(); ++i) {
    const MemberStats& s = per_member[i];
    for (std::size_t k = 0; k < stats.sup_l1_by_level.size(); ++k) {
      raise(stats.sup_l1_by_level[k], k < s.l1_by_level.size() ? s.l1_by_level[k] : 0.0, i);
    }
    raise(stats.sup_abs_signed_level1, std::abs(s.signed_level1), i);
    for (std::size_t e = 0; e < s.advantage.size(); ++e) raise(stats.sup_advantage[e], s.advantage[e], i);
  }
  return stats;
}

}  // namespace coinlab
