#include "coinlab/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "coinlab/bounds.hpp"
#include "coinlab/classes.hpp"
#include "coinlab/coin.hpp"
#include "coinlab/format.hpp"
#include "coinlab/function_spec.hpp"
#include "coinlab/rounding.hpp"
#include "coinlab/spectrum.hpp"

namespace coinlab::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw std::invalid_argument("bad number '" + s + "' in " + std::string(what));
  }
  return v;
}

long long parse_int(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw std::invalid_argument("bad integer '" + s + "' in " + std::string(what));
  }
  return v;
}

bool is_flag_name(std::string_view s) {
  return s == "restriction" || s == "input_negation" || s == "output_negation";
}

struct ClassDescriptor {
  std::vector<std::string> specs;
  ClosureFlags flags;
};

// "SPEC[,SPEC...]+flag+flag"; a '+' followed by something other than a flag
// name stays inside the spec (e.g. const:3:+1).
ClassDescriptor parse_class(std::string_view text) {
  ClassDescriptor d;
  std::string base;
  bool first = true;
  for (const auto& token : split(text, '+')) {
    if (!first && is_flag_name(token)) {
      if (token == "restriction") d.flags.restriction = true;
      if (token == "input_negation") d.flags.input_negation = true;
      if (token == "output_negation") d.flags.output_negation = true;
      continue;
    }
    if (!first) base += '+';
    base += token;
    first = false;
  }
  for (auto& s : split(base, ',')) {
    if (trim(s).empty()) throw std::invalid_argument("empty base spec in class '" + std::string(text) + "'");
    d.specs.emplace_back(trim(s));
  }
  return d;
}

std::vector<TruthTable> build_all(const std::vector<std::string>& specs) {
  std::vector<TruthTable> out;
  for (const auto& s : specs) out.push_back(build_named(s));
  return out;
}

std::string resolved_format(const RunConfig& c) {
  if (!c.format.empty()) return c.format;
  return c.subcommand == "closure" || c.subcommand == "rounding" ? "json" : "csv";
}

int parse_n(const RunConfig& c, int fallback) {
  return c.n.empty() ? fallback : static_cast<int>(parse_int(c.n, "--n"));
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  const Analysis a = Analysis::of(build_named(c.target));
  const int n = a.table.arity();
  std::vector<std::uint64_t> order;
  for (std::uint64_t s = 0; s < a.spectrum.coeffs.size(); ++s) {
    if (std::abs(a.spectrum[s]) > 1e-15) order.push_back(s);
  }
  std::ranges::stable_sort(order, [&](std::uint64_t x, std::uint64_t y) {
    return std::abs(a.spectrum[x]) > std::abs(a.spectrum[y]);
  });
  if (order.size() > static_cast<std::size_t>(std::max(0, c.top))) order.resize(static_cast<std::size_t>(std::max(0, c.top)));

  if (resolved_format(c) == "json") {
    Json j;
    j["arity"] = n;
    j["kind"] = a.table.is_boolean() ? "boolean" : "bounded";
    j["expectation"] = round15(a.spectrum[0]);
    j["variance"] = round15(a.profile.variance);
    j["total_influence"] = round15(a.profile.total_influence);
    j["levels"] = Json::array();
    for (int k = 0; k <= n; ++k) {
      j["levels"].push_back({{"level", k},
                             {"l1", round15(a.profile.l1(k))},
                             {"signed_sum", round15(a.profile.signed_sum(k))},
                             {"weight", round15(a.profile.weight(k))}});
    }
    j["top"] = Json::array();
    for (auto s : order) {
      j["top"].push_back({{"mask", s},
                          {"subset", subset_string(s)},
                          {"level", std::popcount(s)},
                          {"coefficient", round15(a.spectrum[s])}});
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "quantity,value\n"
      << "arity," << n << '\n'
      << "kind," << (a.table.is_boolean() ? "boolean" : "bounded") << '\n'
      << "expectation," << fmt_num(a.spectrum[0]) << '\n'
      << "variance," << fmt_num(a.profile.variance) << '\n'
      << "total_influence," << fmt_num(a.profile.total_influence) << "\n\n";
  write_profile_csv(out, a.profile);
  out << "\nmask,subset,level,coefficient\n";
  for (auto s : order) {
    out << s << ",\"" << subset_string(s) << "\"," << std::popcount(s) << ',' << fmt_num(a.spectrum[s]) << '\n';
  }
  return kOk;
}

// ---- coin ------------------------------------------------------------------

int cmd_coin(const RunConfig& c, std::ostream& out) {
  if (c.eps_grid.empty()) throw std::invalid_argument("coin needs --eps");
  const Analysis a = Analysis::of(build_named(c.target));
  std::vector<BiasPoint> grid;
  for (double e : parse_grid(c.eps_grid)) grid.emplace_back(e);
  const double uniform = a.spectrum[0];
  struct Row {
    double eps, expectation, advantage;
    Method method;
  };
  std::vector<Row> rows;
  for (const BiasPoint& b : grid) {
    advantage(a, b);  // raises NumericalFault when the two methods disagree
    const double direct = expectation_direct(a.table, b);
    const double spectral = expectation_spectral(a.profile, b);
    rows.push_back({b.eps(), direct, std::abs(direct - uniform), Method::direct});
    rows.push_back({b.eps(), spectral, std::abs(spectral - uniform), Method::spectral});
  }
  if (resolved_format(c) == "json") {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"eps", round15(r.eps)},
                   {"expectation", round15(r.expectation)},
                   {"advantage", round15(r.advantage)},
                   {"method", to_string(r.method)}});
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "eps,expectation,advantage,method\n";
  for (const auto& r : rows) {
    out << fmt_num(r.eps) << ',' << fmt_num(r.expectation) << ',' << fmt_num(r.advantage) << ','
        << to_string(r.method) << '\n';
  }
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct Target {
  std::string name;
  TruthTable table;
};

const std::vector<std::string> kDefaultTargets{"maj:3",   "maj:5",   "maj:7",   "maj:9",
                                               "parity:4", "thr:5:2", "dict:4:1", "tribes:2:4"};
constexpr int kMaxExhaustiveN = 4;

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Target> resolve_targets(const RunConfig& c) {
  std::vector<Target> out;
  if (c.exhaustive_n) {
    const int n = *c.exhaustive_n;
    if (n < 0) throw std::invalid_argument("--exhaustive-n must be non-negative");
    if (n > kMaxExhaustiveN) {
      throw Infeasible("--exhaustive-n " + std::to_string(n) + " needs 2^(2^n) functions; limit is n <= 4");
    }
    const std::size_t points = std::size_t{1} << n;
    const std::uint64_t functions = std::uint64_t{1} << points;
    for (std::uint64_t id = 0; id < functions; ++id) {
      std::vector<double> v(points);
      for (std::size_t m = 0; m < points; ++m) v[m] = ((id >> m) & 1U) ? 1.0 : -1.0;
      out.push_back({"fn:" + std::to_string(n) + ":" + std::to_string(id), TruthTable::boolean(n, std::move(v))});
    }
  }
  for (const auto& s : c.targets) out.push_back({s, build_named(s)});
  if (out.empty()) {
    for (const auto& s : kDefaultTargets) out.push_back({s, build_named(s)});
  }
  return out;
}

// +-f/sqrt(n) for each fraction f.
std::vector<double> relative_grid(int n, std::initializer_list<double> fractions) {
  const double unit = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
  std::vector<double> grid;
  for (double f : fractions) {
    grid.push_back(-f * unit);
    grid.push_back(f * unit);
  }
  std::ranges::sort(grid);
  return grid;
}

BoundReport precondition(std::string id, std::vector<std::pair<std::string, double>> params,
                         const std::string& why) {
  return BoundReport::unchecked(std::move(id), std::move(params), BoundStatus::precondition_failed, why);
}

std::vector<BoundReport> suite_prop1(const Target& t, const LevelProfile& p, const std::vector<double>& grid) {
  std::vector<BoundReport> out;
  const int n = p.arity();
  for (double eps : grid) {
    const std::vector<std::pair<std::string, double>> params{{"n", n}, {"eps", eps}};
    try {
      auto [stated, sharp] = check_prop1_variance(p, eps);
      out.push_back(std::move(stated));
      out.push_back(std::move(sharp));
    } catch (const std::domain_error& e) {
      out.push_back(precondition("prop1_variance", params, e.what()));
    }
    try {
      out.push_back(check_prop1_maxlevel(p, eps));
    } catch (const std::domain_error& e) {
      out.push_back(precondition("prop1_maxlevel", params, e.what()));
    }
  }
  for (auto& r : out) r.witness = t.name;
  return out;
}

std::vector<BoundReport> suite_cor22(const Target& t, const FourierSpectrum& s, const std::vector<double>& grid) {
  std::vector<BoundReport> out;
  try {
    out.push_back(check_cor_nonneg(s, grid));
  } catch (const std::domain_error& e) {
    out.push_back(precondition("cor22_nonneg", {{"n", s.arity}}, e.what()));
  }
  for (auto& r : out) r.witness = t.name;
  return out;
}

std::vector<BoundReport> suite_cor25(const Target& t, const LevelProfile& p, const std::vector<double>& grid) {
  std::vector<BoundReport> out;
  for (double eps : grid) {
    try {
      for (auto& r : check_cor_l1coinsmalleps(p, eps)) out.push_back(std::move(r));
    } catch (const std::domain_error& e) {
      out.push_back(precondition("cor25_l1coin", {{"n", p.arity()}, {"eps", eps}}, e.what()));
    }
  }
  for (auto& r : out) r.witness = t.name;
  return out;
}

// Smallest B for which the improvement hypothesis holds on its grid.
double auto_improve_B(const LevelProfile& p, double eps0) {
  double B = 0.0;
  for (double m : improve_hypothesis_grid(eps0)) {
    for (double e : {m, -m}) {
      const double gap = std::abs(expectation_spectral(p, BiasPoint(e)) - p.signed_sum(0));
      B = std::max(B, gap / m);
    }
  }
  return B;
}

std::vector<BoundReport> suite_cor24(const RunConfig& c, const Target& t, const LevelProfile& p,
                                     bool user_grid, const std::vector<double>& grid) {
  const int n = p.arity();
  std::vector<BoundReport> out;
  if (n == 0) {
    out.push_back(precondition("cor24_improve", {{"n", 0}}, "needs n >= 1"));
  } else {
    const double eps0 = c.eps0.value_or(0.5 / std::sqrt(static_cast<double>(n)));
    std::vector<double> points = grid;
    if (!user_grid) {
      points.clear();
      for (double f : {0.25, 0.5, 0.75, 0.99}) {
        points.push_back(-f * eps0);
        points.push_back(f * eps0);
      }
    }
    for (double eps : points) {
      try {
        const double B = c.B ? *c.B : auto_improve_B(p, eps0);
        for (auto& r : check_cor_improve(p, B, eps0, eps)) out.push_back(std::move(r));
      } catch (const std::domain_error& e) {
        out.push_back(precondition("cor24_improve", {{"n", n}, {"eps0", eps0}, {"eps", eps}}, e.what()));
      }
    }
  }
  for (auto& r : out) r.witness = t.name;
  return out;
}

std::vector<BoundReport> per_target_suite(const RunConfig& c, const std::string& suite) {
  const auto targets = resolve_targets(c);
  const bool user_grid = !c.eps_grid.empty();
  const std::vector<double> fixed_grid = user_grid ? parse_grid(c.eps_grid) : std::vector<double>{};
  std::vector<std::vector<BoundReport>> rows(targets.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      const Target& t = targets[static_cast<std::size_t>(i)];
      const FourierSpectrum s = wht_forward(t.table);
      const LevelProfile p = level_profile(s);
      const int n = t.table.arity();
      auto& r = rows[static_cast<std::size_t>(i)];
      if (suite == "prop1") {
        r = suite_prop1(t, p, user_grid ? fixed_grid : relative_grid(n, {0.25, 0.5, 0.75, 1.0}));
      } else if (suite == "cor22") {
        r = suite_cor22(t, s, user_grid ? fixed_grid : relative_grid(n, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}));
      } else if (suite == "cor25") {
        r = suite_cor25(t, p, user_grid ? fixed_grid : relative_grid(n, {0.25, 0.5, 0.75, 1.0}));
      } else {
        r = suite_cor24(c, t, p, user_grid, fixed_grid);
      }
    } catch (...) {
#pragma omp critical(coinlab_cli_verify)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<BoundReport> out;
  for (auto& r : rows) std::ranges::move(r, std::back_inserter(out));
  return out;
}

void name_witness(BoundReport& r, const FunctionClass& fc) {
  const std::size_t idx = r.witness.rfind("member ", 0) == 0 ? std::stoull(r.witness.substr(7)) : fc.members.size();
  if (idx < fc.members.size()) {
    const auto& o = fc.origins[idx];
    r.witness = o.describe(fc.base[o.base_index].arity());
  }
}

std::vector<BoundReport> suite_tal(const RunConfig& c, bool& infeasible) {
  const std::string text = c.class_spec.empty() ? "maj:5+restriction" : c.class_spec;
  const ClassDescriptor d = parse_class(text);
  const auto base = build_all(d.specs);
  const std::vector<double> grid = parse_grid(c.eps_grid.empty() ? "0.1:0.9:9" : c.eps_grid);
  FunctionClass fc;
  try {
    fc = closure_enumerate(base, d.flags, c.cap);
  } catch (const CapExceeded& e) {
    infeasible = true;
    return {precondition("tal_lemma", {}, e.what())};
  }
  std::vector<BoundReport> out;
  for (double eps : grid) {
    for (int which = 0; which < 2; ++which) {
      const char* id = which == 0 ? "tal_lemma" : "tal_derivative";
      try {
        ClassBoundResult r = which == 0 ? check_tal_lemma(fc, eps) : check_derivative_bound(fc, eps);
        name_witness(r.aggregate, fc);
        out.push_back(std::move(r.aggregate));
      } catch (const std::invalid_argument& e) {
        out.push_back(precondition(id, {{"eps", eps}}, e.what()));
      } catch (const std::domain_error& e) {
        out.push_back(precondition(id, {{"eps", eps}}, e.what()));
      }
    }
  }
  for (auto& r : out) r.note = text + ": " + r.note;
  return out;
}

std::vector<BoundReport> suite_robp(const RunConfig& c) {
  const int n = parse_n(c, 16);
  const std::size_t samples = c.samples.value_or(100);
  return {check_robp_level1(n, c.w, samples, c.seed, c.log_base).aggregate};
}

std::vector<BoundReport> suite_optimal(const RunConfig& c) {
  std::vector<int> ns;
  if (c.n.empty()) {
    ns = {1, 2, 3};
  } else {
    for (const auto& part : split(c.n, ',')) ns.push_back(static_cast<int>(parse_int(part, "--n")));
  }
  const std::vector<double> grid = parse_grid(c.eps_grid.empty() ? "0.1,0.3,0.5" : c.eps_grid);
  std::vector<BoundReport> out;
  for (int n : ns) {
    if (n > 4) throw Infeasible("optimal distinguisher brute force is limited to n <= 4");
    for (double eps : grid) out.push_back(check_optimal_distinguisher(n, eps));
  }
  return out;
}

void write_reports(const RunConfig& c, const std::vector<BoundReport>& reports, std::ostream& out) {
  if (resolved_format(c) == "json") {
    Json j = Json::array();
    for (const auto& r : reports) {
      Json params = Json::object();
      for (const auto& [k, v] : r.params) params[k] = round15(v);
      auto num = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(round15(v)); };
      j.push_back({{"bound_id", r.bound_id},
                   {"witness", r.witness},
                   {"params", params},
                   {"lhs", num(r.lhs)},
                   {"rhs", num(r.rhs)},
                   {"margin", num(r.margin)},
                   {"tolerance", r.tolerance},
                   {"holds", r.holds},
                   {"status", to_string(r.status)},
                   {"note", r.note}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "bound_id,witness,params,lhs,rhs,margin,holds,status\n";
  for (const auto& r : reports) {
    out << r.bound_id << ',' << r.witness << ',' << r.params_string() << ',' << fmt_num(r.lhs) << ','
        << fmt_num(r.rhs) << ',' << fmt_num(r.margin) << ',' << (r.holds ? "true" : "false") << ','
        << to_string(r.status) << '\n';
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::string& suite = c.target;
  std::vector<BoundReport> reports;
  bool infeasible = false;
  auto append = [&reports](std::vector<BoundReport> more) { std::ranges::move(more, std::back_inserter(reports)); };
  const bool all = suite == "all";
  for (const char* s : {"prop1", "cor22", "cor24", "cor25"}) {
    if (all || suite == s) append(per_target_suite(c, s));
  }
  if (all || suite == "tal") append(suite_tal(c, infeasible));
  if (all || suite == "robp") append(suite_robp(c));
  if (all || suite == "optimal") append(suite_optimal(c));

  if (c.tolerance) {
    for (auto& r : reports) {
      if (r.status != BoundStatus::holds && r.status != BoundStatus::violated) continue;
      r.tolerance = *c.tolerance;
      r.holds = r.margin >= -r.tolerance;
      r.status = r.holds ? BoundStatus::holds : BoundStatus::violated;
    }
  }
  write_reports(c, reports, out);
  const auto violations = std::ranges::count_if(reports, [](const BoundReport& r) { return r.violated(); });
  err << "verify " << suite << ": " << reports.size() << " reports, " << violations << " violations\n";
  if (violations > 0) return kViolation;
  return infeasible ? kInfeasible : kOk;
}

// ---- closure ---------------------------------------------------------------

int cmd_closure(const RunConfig& c, std::ostream& out) {
  if (c.class_spec.empty()) throw std::invalid_argument("closure needs --class");
  const ClassDescriptor d = parse_class(c.class_spec);
  const auto base = build_all(d.specs);
  const std::vector<double> grid = parse_grid(c.eps_grid.empty() ? "0.1:0.9:9" : c.eps_grid);
  for (double e : grid) BiasPoint{e};
  const FunctionClass fc = c.samples ? closure_sample(base, d.flags, *c.samples, c.seed)
                                     : closure_enumerate(base, d.flags, c.cap, c.skip_signs);
  const auto per = member_stats(fc, grid);
  const ClassStats stats = class_stats(fc, grid);

  auto write_csv = [&](std::ostream& o) {
    o << "member_id,arity,l1_level1,l1_level3,signed_level1";
    for (double e : grid) o << ",advantage@" << fmt_num(e);
    o << '\n';
    for (std::size_t i = 0; i < per.size(); ++i) {
      const auto& s = per[i];
      auto l1 = [&s](std::size_t k) { return k < s.l1_by_level.size() ? s.l1_by_level[k] : 0.0; };
      o << i << ',' << s.arity << ',' << fmt_num(l1(1)) << ',' << fmt_num(l1(3)) << ',' << fmt_num(s.signed_level1);
      for (double a : s.advantage) o << ',' << fmt_num(a);
      o << '\n';
    }
  };
  if (resolved_format(c) == "csv") {
    write_csv(out);
    return kOk;
  }
  auto witness = [&fc](std::size_t idx) {
    const auto& o = fc.origins[idx];
    return o.describe(fc.base[o.base_index].arity());
  };
  Json j;
  j["class"] = c.class_spec;
  j["flags"] = d.flags.to_string();
  j["mode"] = fc.mode == ClassMode::enumerate ? "enumerate" : "sample";
  j["exact"] = stats.exact;
  j["member_count"] = stats.member_count;
  j["signs_skipped"] = fc.signs_skipped;
  if (fc.mode == ClassMode::sample) j["seed"] = fc.seed;
  j["sup_l1_by_level"] = Json::array();
  for (std::size_t k = 0; k < stats.sup_l1_by_level.size(); ++k) {
    const auto& w = stats.sup_l1_by_level[k];
    j["sup_l1_by_level"].push_back({{"level", k}, {"value", round15(w.value)}, {"witness", witness(w.member)}});
  }
  j["sup_abs_signed_level1"] = {{"value", round15(stats.sup_abs_signed_level1.value)},
                                {"witness", witness(stats.sup_abs_signed_level1.member)}};
  j["sup_advantage"] = Json::array();
  for (std::size_t e = 0; e < grid.size(); ++e) {
    const auto& w = stats.sup_advantage[e];
    j["sup_advantage"].push_back({{"eps", round15(grid[e])}, {"value", round15(w.value)}, {"witness", witness(w.member)}});
  }
  out << j.dump(2) << '\n';
  if (!c.csv_path.empty()) {
    std::ofstream f(c.csv_path);
    if (!f) throw std::invalid_argument("cannot write " + c.csv_path);
    write_csv(f);
  }
  return kOk;
}

// ---- rounding --------------------------------------------------------------

constexpr double kRequiredSeedFraction = 0.95;

RoundingExperimentConfig experiment_config(const RunConfig& c, std::uint64_t seed) {
  RoundingExperimentConfig cfg;
  cfg.n = parse_n(c, cfg.n);
  cfg.B = c.B.value_or(cfg.B);
  cfg.seed = seed;
  cfg.closure_samples = c.samples.value_or(cfg.closure_samples);
  if (c.allowance) cfg.level3_allowance = *c.allowance;
  cfg.delta = c.delta;
  if (!c.eps_list.empty()) cfg.eps_list = parse_grid(c.eps_list);
  return cfg;
}

Json report_json(const RoundingExperimentReport& r) {
  Json j;
  j["n"] = r.n;
  j["B"] = round15(r.B);
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["identity_rounding"] = r.identity_rounding;
  j["B_in_range"] = r.B_in_range;
  j["warning"] = r.warning;
  j["level1"] = {{"target", round15(r.level1_target)},
                 {"abs_signed_max_observed", round15(r.abs_signed_level1_max_observed)},
                 {"l1_max_observed", round15(r.l1_level1_max_observed)},
                 {"violations", r.level1_violations},
                 {"ok", r.level1_ok}};
  j["level3"] = {{"l1_majority", round15(r.l1_level3_of_majority)},
                 {"l1_scaled_majority", round15(r.l1_level3_of_scaled_majority)},
                 {"l1_rounded", round15(r.l1_level3_of_rounded)},
                 {"signed_deviation", round15(r.level3_signed_deviation)},
                 {"allowance", round15(r.level3_allowance)},
                 {"hoeffding_allowance", round15(r.hoeffding_allowance)},
                 {"proof_allowance", round15(r.proof_allowance)},
                 {"ok", r.level3_ok}};
  j["hoeffding_predictions"] = Json::array();
  for (const auto& [eps, tail] : r.hoeffding_predictions) {
    j["hoeffding_predictions"].push_back({{"eps", round15(eps)}, {"tail_bound", round15(tail)}});
  }
  j["passed"] = r.passed();
  return j;
}

void write_per_sample_csv(std::ostream& o, const RoundingExperimentReport& r) {
  o << "member_id,arity,signed_level1,l1_level1\n";
  for (const auto& s : r.per_sample) {
    o << s.member_id << ',' << s.arity << ',' << fmt_num(s.signed_level1) << ',' << fmt_num(s.l1_level1) << '\n';
  }
}

int cmd_rounding(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const bool json = resolved_format(c) == "json";
  if (c.seed_last) {
    const std::uint64_t first = c.seed, last = *c.seed_last;
    const std::size_t count = static_cast<std::size_t>(last - first) + 1;
    std::vector<RoundingExperimentReport> runs(count);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      try {
        runs[static_cast<std::size_t>(i)] = counterexample_experiment(experiment_config(c, first + static_cast<std::uint64_t>(i)));
      } catch (...) {
#pragma omp critical(coinlab_cli_rounding)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    const auto passed = static_cast<std::size_t>(std::ranges::count_if(runs, [](const auto& r) { return r.passed(); }));
    const double fraction = static_cast<double>(passed) / static_cast<double>(count);
    if (json) {
      Json j;
      j["n"] = runs.front().n;
      j["B"] = round15(runs.front().B);
      j["seed_first"] = first;
      j["seed_last"] = last;
      j["passed"] = passed;
      j["total"] = count;
      j["fraction"] = round15(fraction);
      j["required_fraction"] = kRequiredSeedFraction;
      j["runs"] = Json::array();
      for (const auto& r : runs) {
        j["runs"].push_back({{"seed", r.seed},
                             {"level1_ok", r.level1_ok},
                             {"abs_signed_level1_max_observed", round15(r.abs_signed_level1_max_observed)},
                             {"level3_ok", r.level3_ok},
                             {"l1_level3_rounded", round15(r.l1_level3_of_rounded)},
                             {"passed", r.passed()}});
      }
      out << j.dump(2) << '\n';
    } else {
      out << "seed,level1_ok,abs_signed_level1_max_observed,level3_ok,l1_level3_rounded,passed\n";
      for (const auto& r : runs) {
        out << r.seed << ',' << r.level1_ok << ',' << fmt_num(r.abs_signed_level1_max_observed) << ','
            << r.level3_ok << ',' << fmt_num(r.l1_level3_of_rounded) << ',' << r.passed() << '\n';
      }
    }
    err << "rounding: " << passed << " of " << count << " seeds pass both targets\n";
    return fraction >= kRequiredSeedFraction ? kOk : kViolation;
  }

  const RoundingExperimentConfig cfg = experiment_config(c, c.seed);
  const RoundingExperimentReport r = counterexample_experiment(cfg);
  if (!r.warning.empty()) err << "warning: " << r.warning << '\n';
  if (json) {
    Json j = report_json(r);
    const std::size_t trials = c.trials.value_or(0);
    if (trials > 0) {
      const TruthTable g = scale(build_majority(cfg.n), r.identity_rounding ? 1.0 : cfg.B / std::sqrt(cfg.n));
      const ConcentrationReport cr =
          empirical_concentration(g, SubsetFamily::level(cfg.n, 3), trials, cfg.seed, cfg.eps_list);
      Json rows = Json::array();
      for (const auto& row : cr.rows) {
        rows.push_back({{"eps", round15(row.eps)},
                        {"exceed_count", row.exceed_count},
                        {"empirical", round15(row.empirical)},
                        {"bound", round15(row.bound)},
                        {"allowed", round15(row.allowed)},
                        {"within", row.within}});
      }
      j["concentration"] = {{"trials", cr.trials},
                            {"max_deviation", round15(cr.max_deviation)},
                            {"rows", rows},
                            {"all_within", cr.all_within}};
    }
    out << j.dump(2) << '\n';
    if (!c.csv_path.empty()) {
      std::ofstream f(c.csv_path);
      if (!f) throw std::invalid_argument("cannot write " + c.csv_path);
      write_per_sample_csv(f, r);
    }
  } else {
    write_per_sample_csv(out, r);
  }
  return r.passed() ? kOk : kViolation;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.target.find("{n}") == std::string::npos) throw std::invalid_argument("sweep template needs {n}");
  const auto parts = split(c.n, ':');
  if (c.n.empty() || parts.size() < 2 || parts.size() > 3) {
    throw std::invalid_argument("sweep needs --n start:stop[:step]");
  }
  const long long start = parse_int(parts[0], "--n"), stop = parse_int(parts[1], "--n");
  const long long step = parts.size() == 3 ? parse_int(parts[2], "--n") : 1;
  if (step < 1 || stop < start) throw std::invalid_argument("sweep range must be increasing with step >= 1");
  struct Row {
    long long n;
    double l1, normalized;
  };
  std::vector<Row> rows;
  for (long long n = start; n <= stop; n += step) {
    std::string spec = c.target;
    for (auto pos = spec.find("{n}"); pos != std::string::npos; pos = spec.find("{n}")) {
      spec.replace(pos, 3, std::to_string(n));
    }
    const double l1 = level_profile(wht_forward(build_named(spec))).l1(c.level);
    rows.push_back({n, l1, l1 / std::pow(static_cast<double>(n), c.level / 2.0)});
  }
  if (resolved_format(c) == "json") {
    Json j = Json::array();
    for (const auto& r : rows) j.push_back({{"n", r.n}, {"l1", round15(r.l1)}, {"normalized", round15(r.normalized)}});
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "n,l1,normalized\n";
  for (const auto& r : rows) out << r.n << ',' << fmt_num(r.l1) << ',' << fmt_num(r.normalized) << '\n';
  return kOk;
}

}  // namespace

// ---- grid and argument parsing -----------------------------------------------

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty grid");
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be a:b:k or a comma list");
    const double a = parse_double(parts[0], "grid"), b = parse_double(parts[1], "grid");
    const long long k = parse_int(parts[2], "grid");
    if (k < 1) throw std::invalid_argument("grid point count must be at least 1");
    for (long long i = 0; i < k; ++i) {
      out.push_back(k == 1 ? a : (i == k - 1 ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1)));
    }
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part, "grid"));
  return out;
}

std::vector<std::string> RunConfig::canonical_args() const {
  std::vector<std::string> a;
  auto opt = [&a](const char* name, std::string value) {
    a.emplace_back(name);
    a.push_back(std::move(value));
  };
  if (!format.empty()) opt("--format", format);
  if (tolerance) opt("--tolerance", fmt17(*tolerance));
  if (jobs != 0) opt("--jobs", std::to_string(jobs));
  opt("--seed", std::to_string(seed) + (seed_last ? ".." + std::to_string(*seed_last) : ""));
  a.push_back(subcommand);
  if (!target.empty()) a.push_back(target);
  if (!eps_grid.empty()) opt("--eps-grid", eps_grid);
  if (!targets.empty()) {
    std::string joined;
    for (const auto& t : targets) joined += (joined.empty() ? "" : ",") + t;
    opt("--targets", joined);
  }
  if (!class_spec.empty()) opt("--class", class_spec);
  if (exhaustive_n) opt("--exhaustive-n", std::to_string(*exhaustive_n));
  if (!n.empty()) opt("--n", n);
  const RunConfig defaults;
  if (w != defaults.w) opt("--w", std::to_string(w));
  if (level != defaults.level) opt("--level", std::to_string(level));
  if (top != defaults.top) opt("--top", std::to_string(top));
  if (samples) opt("--samples", std::to_string(*samples));
  if (trials) opt("--trials", std::to_string(*trials));
  if (cap != defaults.cap) opt("--cap", std::to_string(cap));
  if (skip_signs) a.emplace_back("--skip-signs");
  if (B) opt("--B", fmt17(*B));
  if (eps0) opt("--eps0", fmt17(*eps0));
  if (allowance) opt("--allowance", fmt17(*allowance));
  if (delta != defaults.delta) opt("--delta", fmt17(delta));
  if (log_base != defaults.log_base) opt("--log-base", fmt17(log_base));
  if (!eps_list.empty()) opt("--eps-list", eps_list);
  if (!csv_path.empty()) opt("--csv", csv_path);
  return a;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& s : canonical_args()) out += (out.empty() ? "" : " ") + s;
  return out;
}

ParseResult parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  std::string seed_text = "42";
  std::string targets_text;
  CLI::App app{"Fourier analysis of Boolean functions and coin-problem experiments", "coinlab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance", c.tolerance, "Override bound tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", c.jobs, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed_text, "Seed, or a..b range for rounding");

  auto* analyze = app.add_subcommand("analyze", "Level profile and top coefficients of a function");
  analyze->add_option("spec", c.target, "Function spec")->required();
  analyze->add_option("--top", c.top, "Number of largest coefficients")->check(CLI::NonNegativeNumber);

  auto* coin = app.add_subcommand("coin", "Biased-coin expectations and advantage");
  coin->add_option("spec", c.target, "Function spec")->required();
  coin->add_option("--eps,--eps-grid", c.eps_grid, "Grid a:b:k or comma list")->required();

  auto* verify = app.add_subcommand("verify", "Check bound suites");
  verify->add_option("suite", c.target, "Suite")
      ->required()
      ->check(CLI::IsMember({"prop1", "cor22", "cor24", "cor25", "tal", "robp", "optimal", "all"}));
  verify->add_option("--targets", targets_text, "Comma-separated function specs");
  verify->add_option("--exhaustive-n", c.exhaustive_n, "All Boolean functions on n <= 4 variables");
  verify->add_option("--class", c.class_spec, "Class descriptor for tal");
  verify->add_option("--eps,--eps-grid", c.eps_grid, "Grid a:b:k or comma list");
  verify->add_option("--n", c.n, "Arity (robp, optimal)");
  verify->add_option("--w", c.w, "ROBP width")->check(CLI::PositiveNumber);
  verify->add_option("--samples", c.samples, "ROBP samples");
  verify->add_option("--B", c.B, "Hypothesis constant for cor24 (default: smallest valid)");
  verify->add_option("--eps0", c.eps0, "eps0 for cor24");
  verify->add_option("--log-base", c.log_base, "Logarithm base for the ROBP r")->check(CLI::PositiveNumber);
  verify->add_option("--cap", c.cap, "Enumeration cap");

  auto* closure = app.add_subcommand("closure", "Class closure statistics");
  closure->add_option("--class", c.class_spec, "Class descriptor")->required();
  closure->add_option("--sample,--samples", c.samples, "Sample this many members instead of enumerating");
  closure->add_option("--cap", c.cap, "Enumeration cap");
  closure->add_option("--eps,--eps-grid", c.eps_grid, "Advantage grid");
  closure->add_flag("--skip-signs", c.skip_signs, "Enumerate the identity sign pattern only");
  closure->add_option("--csv,--per-member-csv", c.csv_path, "Also write per-member CSV here");

  auto* rounding = app.add_subcommand("rounding", "Scaled-majority rounding experiment");
  rounding->add_option("--n", c.n, "Odd arity");
  rounding->add_option("--B", c.B, "Scale target B");
  rounding->add_option("--samples", c.samples, "Closure members to sample");
  rounding->add_option("--trials", c.trials, "Concentration trials");
  rounding->add_option("--eps-list", c.eps_list, "Deviation thresholds");
  rounding->add_option("--allowance", c.allowance, "Level-3 allowance (default: Hoeffding at delta)");
  rounding->add_option("--delta", c.delta, "Confidence for the Hoeffding allowance");
  rounding->add_option("--csv,--per-sample-csv", c.csv_path, "Also write per-sample CSV here");

  auto* sweep = app.add_subcommand("sweep", "L1 of one level across a family");
  sweep->add_option("template", c.target, "Spec with {n}, e.g. maj:{n}")->required();
  sweep->add_option("--n", c.n, "start:stop[:step]")->required();
  sweep->add_option("--level", c.level, "Level k")->check(CLI::NonNegativeNumber);

  ParseResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    c.subcommand = app.get_subcommands().front()->get_name();
    if (const auto dots = seed_text.find(".."); dots != std::string::npos) {
      c.seed = static_cast<std::uint64_t>(parse_int(seed_text.substr(0, dots), "--seed"));
      c.seed_last = static_cast<std::uint64_t>(parse_int(seed_text.substr(dots + 2), "--seed"));
      if (*c.seed_last < c.seed) throw std::invalid_argument("seed range must be increasing");
    } else {
      c.seed = static_cast<std::uint64_t>(parse_int(seed_text, "--seed"));
    }
    if (!targets_text.empty()) {
      for (auto& t : split(targets_text, ',')) c.targets.emplace_back(trim(t));
    }
    result.config = std::move(c);
  } catch (const CLI::CallForHelp&) {
    result.message = app.help();
    result.exit_code = kOk;
  } catch (const CLI::CallForAllHelp&) {
    result.message = app.help("", CLI::AppFormatMode::All);
    result.exit_code = kOk;
  } catch (const CLI::ParseError& e) {
    result.message = std::string("error: ") + e.what() + "\nrun with --help for usage\n";
    result.exit_code = kUsage;
  } catch (const std::invalid_argument& e) {
    result.message = std::string("error: ") + e.what() + "\n";
    result.exit_code = kUsage;
  }
  return result;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
  try {
    if (c.seed_last && c.subcommand != "rounding") {
      throw std::invalid_argument("a seed range is only accepted by rounding");
    }
    if (c.subcommand == "analyze") return cmd_analyze(c, out);
    if (c.subcommand == "coin") return cmd_coin(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out, err);
    if (c.subcommand == "closure") return cmd_closure(c, out);
    if (c.subcommand == "rounding") return cmd_rounding(c, out, err);
    if (c.subcommand == "sweep") return cmd_sweep(c, out);
    err << "error: unknown subcommand '" << c.subcommand << "'\n";
    return kUsage;
  } catch (const SpecParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NumericalFault& e) {
    err << "numerical fault: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const ParseResult parsed = parse_args(args);
  if (!parsed.config) {
    (parsed.exit_code == kOk ? out : err) << parsed.message;
    return parsed.exit_code;
  }
  return execute(*parsed.config, out, err);
}

}  // namespace coinlab::cli
