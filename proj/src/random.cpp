#include "hcsnet/random.hpp"

#include <cmath>
#include <numbers>

namespace hcsnet {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t k : keys) {
    h = splitmix64(h ^ splitmix64(k));
  }
  return h;
}

KeyedEngine keyed_engine(std::uint64_t seed, Stream stream,
                         std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix_keys({seed, static_cast<std::uint64_t>(stream)});
  for (std::uint64_t k : keys) {
    h = splitmix64(h ^ splitmix64(k));
  }
  return KeyedEngine(h);
}

double keyed_normal(std::uint64_t seed, Stream stream,
                    std::initializer_list<std::uint64_t> keys) {
  KeyedEngine rng = keyed_engine(seed, stream, keys);
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hcsnet
