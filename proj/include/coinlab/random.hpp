#pragma once

#include <cstdint>

namespace coinlab::rng {

// Independent draw streams. Mixed into the key so that, e.g., rounding and
// closure sampling with the same user seed do not share bits.
enum class Stream : std::uint64_t {
  random_boolean = 1,
  random_bounded = 2,
  rounding = 3,
  closure_sample = 4,
  robp = 5,
  trials = 6,
  generic = 7,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based hash of (seed, stream, index). Pure: the value for a given
/// index never depends on which other indices were drawn or in what order.
std::uint64_t keyed(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Uniform double in [0, 1) with 53 random bits.
double unit(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Sequential view over the keyed hash: draw k is keyed(seed, stream, k).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, Stream stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return keyed(seed_, stream_, counter_++); }
  double next_unit();
  // Uniform in [0, bound); bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  Stream stream_;
  std::uint64_t counter_ = 0;
};

/// Derives a child seed, e.g. one per trial in a repeated experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t child);

}  // namespace coinlab::rng
