#include "coinlab/random.hpp"

namespace coinlab::rng {

std::uint64_t keyed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ index);
}

double unit(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return static_cast<double>(keyed(seed, stream, index) >> 11) * 0x1.0p-53;
}

double CounterStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterStream::below(std::uint64_t bound) {
  for (;;) {
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next_u64()) * bound;
    const auto low = static_cast<std::uint64_t>(product);
    if (low >= (-bound) % bound) {
      return static_cast<std::uint64_t>(product >> 64);
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t child) {
  return keyed(seed, Stream::generic, child);
}

}  // namespace coinlab::rng
