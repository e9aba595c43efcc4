#include "coinlab/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "coinlab/format.hpp"
#include "coinlab/kernels.hpp"

namespace coinlab {

namespace {

template <typename Transform64, typename TransformDouble>
FourierSpectrum forward(const TruthTable& f, Transform64&& transform64,
                        TransformDouble&& transform_double) {
  FourierSpectrum out;
  out.arity = f.arity();
  const double scale = std::ldexp(1.0, -f.arity());
  if (f.is_boolean()) {
    std::vector<std::int64_t> work(f.size());
    for (std::size_t m = 0; m < work.size(); ++m) work[m] = f[m] > 0 ? 1 : -1;
    transform64(std::span<std::int64_t>(work));
    out.coeffs.resize(work.size());
    for (std::size_t s = 0; s < work.size(); ++s) out.coeffs[s] = static_cast<double>(work[s]) * scale;
    out.exact = true;
  } else {
    out.coeffs.assign(f.values().begin(), f.values().end());
    transform_double(std::span<double>(out.coeffs));
    for (double& c : out.coeffs) c *= scale;
  }
  return out;
}

double level_value(const std::vector<double>& v, int k) {
  return k >= 0 && k < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(k)] : 0.0;
}

}  // namespace

double LevelProfile::l1(int k) const { return level_value(l1_by_level, k); }
double LevelProfile::signed_sum(int k) const { return level_value(signed_sum_by_level, k); }
double LevelProfile::weight(int k) const { return level_value(weight_by_level, k); }

FourierSpectrum wht_forward(const TruthTable& f) {
  return forward(
      f, [](std::span<std::int64_t> a) { kernels::fwht(a); },
      [](std::span<double> a) { kernels::fwht(a); });
}

FourierSpectrum wht_forward_serial(const TruthTable& f) {
  return forward(
      f, [](std::span<std::int64_t> a) { kernels::fwht_serial(a); },
      [](std::span<double> a) { kernels::fwht_serial(a); });
}

double naive_coefficient(const TruthTable& f, std::uint64_t mask) {
  if (mask >= f.size()) throw std::out_of_range("subset mask outside 2^n");
  double total = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    total += (std::popcount(m & mask) % 2 == 0) ? f[m] : -f[m];
  }
  return total / static_cast<double>(f.size());
}

LevelProfile level_profile(const FourierSpectrum& spectrum) {
  const auto levels = static_cast<std::size_t>(spectrum.arity) + 1;
  LevelProfile p;
  p.l1_by_level.assign(levels, 0.0);
  p.signed_sum_by_level.assign(levels, 0.0);
  p.weight_by_level.assign(levels, 0.0);
  for (std::size_t s = 0; s < spectrum.coeffs.size(); ++s) {
    const double c = spectrum.coeffs[s];
    const auto k = static_cast<std::size_t>(std::popcount(s));
    p.l1_by_level[k] += std::abs(c);
    p.signed_sum_by_level[k] += c;
    p.weight_by_level[k] += c * c;
  }
  for (std::size_t k = 1; k < levels; ++k) {
    p.total_influence += static_cast<double>(k) * p.weight_by_level[k];
    p.variance += p.weight_by_level[k];
  }
  return p;
}

TruthTable wht_inverse(const FourierSpectrum& spectrum) {
  std::vector<double> values = spectrum.coeffs;
  kernels::fwht(std::span<double>(values));
  for (double& v : values) {
    if (std::abs(v) > 1.0 + 1e-9) throw std::invalid_argument("spectrum does not describe a [-1,1]-valued function");
    v = std::clamp(v, -1.0, 1.0) + 0.0;
  }
  return TruthTable::infer(spectrum.arity, std::move(values));
}

Analysis Analysis::of(TruthTable f) {
  FourierSpectrum spectrum = wht_forward(f);
  LevelProfile profile = level_profile(spectrum);
  return {std::move(f), std::move(spectrum), std::move(profile)};
}

std::string subset_string(std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; mask >> i; ++i) {
    if ((mask >> i) & 1U) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out + "}";
}

void write_spectrum_csv(std::ostream& out, const FourierSpectrum& spectrum) {
  out << "mask,subset,level,coefficient\n";
  for (std::size_t s = 0; s < spectrum.coeffs.size(); ++s) {
    out << s << ",\"" << subset_string(s) << "\"," << std::popcount(s) << ','
        << fmt_num(spectrum.coeffs[s]) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const LevelProfile& profile) {
  out << "level,l1,signed_sum,weight\n";
  for (std::size_t k = 0; k < profile.l1_by_level.size(); ++k) {
    out << k << ',' << fmt_num(profile.l1_by_level[k]) << ','
        << fmt_num(profile.signed_sum_by_level[k]) << ',' << fmt_num(profile.weight_by_level[k])
        << '\n';
  }
}

}  // namespace coinlab
