#include "coinlab/truth_table.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "coinlab/random.hpp"

namespace coinlab {

namespace {

std::size_t table_size(int arity) { return std::size_t{1} << arity; }

void check_length(int arity, const std::vector<double>& values) {
  check_arity(arity);
  if (values.size() != table_size(arity)) {
    throw std::invalid_argument("table length " + std::to_string(values.size()) +
                                " does not match 2^" + std::to_string(arity));
  }
}

bool all_signs(const std::vector<double>& values) {
  for (double v : values) {
    if (v != 1.0 && v != -1.0) return false;
  }
  return true;
}

template <typename Fn>
TruthTable generate_boolean(int n, Fn&& value_at) {
  check_arity(n);
  std::vector<double> values(table_size(n));
  for (std::size_t m = 0; m < values.size(); ++m) values[m] = value_at(m) ? 1.0 : -1.0;
  return TruthTable::boolean(n, std::move(values));
}

// Base index and free-variable bit positions of a restriction.
struct RestrictionLayout {
  std::uint64_t base = 0;
  std::vector<int> free_bits;
};

RestrictionLayout layout_of(int arity, const Restriction& rho) {
  RestrictionLayout layout;
  for (const auto& [var, value] : rho.fixed) {
    if (var < 1 || var > arity) {
      throw std::out_of_range("restriction index " + std::to_string(var) +
                              " outside [1, " + std::to_string(arity) + "]");
    }
    if (value != 1 && value != -1) {
      throw std::invalid_argument("restriction value must be +1 or -1");
    }
    if (value == -1) layout.base |= std::uint64_t{1} << (var - 1);
  }
  for (int i = 0; i < arity; ++i) {
    if (!rho.fixed.contains(i + 1)) layout.free_bits.push_back(i);
  }
  return layout;
}

std::uint64_t flip_mask_of(int arity, const SignPattern& s) {
  if (static_cast<int>(s.input_signs.size()) != arity) {
    throw std::invalid_argument("sign pattern length does not match arity");
  }
  if (s.output_sign != 1 && s.output_sign != -1) {
    throw std::invalid_argument("output sign must be +1 or -1");
  }
  std::uint64_t mask = 0;
  for (int i = 0; i < arity; ++i) {
    const int sigma = s.input_signs[static_cast<std::size_t>(i)];
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("input signs must be +1 or -1");
    if (sigma == -1) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

TruthTable composed(const TruthTable& f, std::uint64_t flip, double tau,
                    const RestrictionLayout& layout) {
  const int m = static_cast<int>(layout.free_bits.size());
  std::vector<double> values(table_size(m));
  const auto count = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static) if (count >= (1 << 16))
  for (std::int64_t zi = 0; zi < count; ++zi) {
    const auto z = static_cast<std::uint64_t>(zi);
    std::uint64_t index = layout.base;
    for (int j = 0; j < m; ++j) {
      if ((z >> j) & 1U) index |= std::uint64_t{1} << layout.free_bits[static_cast<std::size_t>(j)];
    }
    values[z] = tau * f[index ^ flip] + 0.0;
  }
  return f.is_boolean() ? TruthTable::boolean(m, std::move(values))
                        : TruthTable::bounded(m, std::move(values));
}

}  // namespace

void check_arity(int arity) {
  if (arity < 0 || arity > kMaxArity) {
    throw std::out_of_range("arity " + std::to_string(arity) + " outside supported range [0, " +
                            std::to_string(kMaxArity) + "]");
  }
}

TruthTable TruthTable::boolean(int arity, std::vector<double> values) {
  check_length(arity, values);
  if (!all_signs(values)) throw std::invalid_argument("boolean table holds a value other than +-1");
  return TruthTable(arity, TableKind::boolean, std::move(values));
}

TruthTable TruthTable::bounded(int arity, std::vector<double> values) {
  check_length(arity, values);
  for (double v : values) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument("bounded table value outside [-1, 1]");
    }
  }
  return TruthTable(arity, TableKind::bounded, std::move(values));
}

TruthTable TruthTable::infer(int arity, std::vector<double> values) {
  check_length(arity, values);
  return all_signs(values) ? boolean(arity, std::move(values)) : bounded(arity, std::move(values));
}

double TruthTable::at(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != arity_) {
    throw std::invalid_argument("input length does not match arity");
  }
  return values_[index_of(x)];
}

std::string TruthTable::canonical_key() const {
  std::string key(1 + values_.size() * sizeof(double), '\0');
  key[0] = static_cast<char>(arity_);
  std::memcpy(key.data() + 1, values_.data(), values_.size() * sizeof(double));
  return key;
}

std::size_t index_of(std::span<const int> x) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == -1) {
      index |= std::size_t{1} << i;
    } else if (x[i] != 1) {
      throw std::invalid_argument("input coordinates must be +1 or -1");
    }
  }
  return index;
}

std::vector<int> decode_index(std::size_t index, int arity) {
  std::vector<int> x(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) x[static_cast<std::size_t>(i)] = ((index >> i) & 1U) ? -1 : 1;
  return x;
}

TruthTable build_threshold(int n, int k) {
  check_arity(n);
  if (k < 0 || k > n + 1) throw std::invalid_argument("threshold k must lie in [0, n+1]");
  return generate_boolean(n, [n, k](std::size_t m) {
    const int plus_ones = n - std::popcount(m);
    return plus_ones >= k;
  });
}

TruthTable build_majority(int n) {
  if (n % 2 == 0) throw std::invalid_argument("majority needs an odd arity");
  return build_threshold(n, (n + 1) / 2);
}

TruthTable build_parity(int n) {
  return generate_boolean(n, [](std::size_t m) { return std::popcount(m) % 2 == 0; });
}

TruthTable build_dictator(int n, int variable) {
  check_arity(n);
  if (variable < 1 || variable > n) throw std::out_of_range("dictator variable outside [1, n]");
  return generate_boolean(n, [variable](std::size_t m) { return ((m >> (variable - 1)) & 1U) == 0; });
}

TruthTable build_constant(int n, int value) {
  if (value != 1 && value != -1) throw std::invalid_argument("constant must be +1 or -1");
  return generate_boolean(n, [value](std::size_t) { return value == 1; });
}

TruthTable build_tribes(int width, int n) {
  check_arity(n);
  if (width < 1 || n % width != 0) {
    throw std::invalid_argument("tribes width must be positive and divide n");
  }
  const std::size_t block = (std::size_t{1} << width) - 1;
  return generate_boolean(n, [width, n, block](std::size_t m) {
    for (int start = 0; start < n; start += width) {
      if (((m >> start) & block) == 0) return true;
    }
    return false;
  });
}

TruthTable build_random_boolean(int n, std::uint64_t seed) {
  return generate_boolean(n, [seed](std::size_t m) {
    return (rng::keyed(seed, rng::Stream::random_boolean, m) >> 63) == 0;
  });
}

TruthTable build_random_bounded(int n, std::uint64_t seed) {
  check_arity(n);
  std::vector<double> values(table_size(n));
  for (std::size_t m = 0; m < values.size(); ++m) {
    values[m] = 2.0 * rng::unit(seed, rng::Stream::random_bounded, m) - 1.0;
  }
  return TruthTable::bounded(n, std::move(values));
}

TruthTable restrict(const TruthTable& f, const Restriction& rho) {
  return composed(f, 0, 1.0, layout_of(f.arity(), rho));
}

TruthTable apply_signs(const TruthTable& f, const SignPattern& s) {
  return composed(f, flip_mask_of(f.arity(), s), s.output_sign, layout_of(f.arity(), {}));
}

TruthTable restrict_signed(const TruthTable& f, const SignPattern& s, const Restriction& rho) {
  // rho fixes z, not x: the flip mask is XORed after the base bits are placed.
  return composed(f, flip_mask_of(f.arity(), s), s.output_sign, layout_of(f.arity(), rho));
}

TruthTable scale(const TruthTable& f, double c) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) {
    v = v * c + 0.0;  // no negative zeros
    if (std::abs(v) > 1.0) throw std::invalid_argument("scaled value leaves [-1, 1]");
  }
  return TruthTable::bounded(f.arity(), std::move(values));
}

}  // namespace coinlab
