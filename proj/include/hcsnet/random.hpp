#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hcsnet {

// Stream tags keep the keyed generators of different consumers apart.
enum class Stream : std::uint64_t {
  kLayout = 1,
  kShadowing = 2,
  kProbeShadowing = 3,
  kPopulation = 4,
  kSession = 5,
  kWaypoint = 6,
  kReplication = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive hash of a key tuple; the basis of all derived seeds.
std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys);

// SplitMix64 as a UniformRandomBitGenerator. Cheap to construct, so every
// (seed, stream, keys) tuple can own a fresh generator.
class KeyedEngine {
 public:
  using result_type = std::uint64_t;

  explicit KeyedEngine(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1).
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// A generator whose output depends only on (seed, stream, keys), so draws
// never depend on evaluation order.
KeyedEngine keyed_engine(std::uint64_t seed, Stream stream,
                         std::initializer_list<std::uint64_t> keys = {});

// Standard normal draw keyed like keyed_engine (Box-Muller).
double keyed_normal(std::uint64_t seed, Stream stream,
                    std::initializer_list<std::uint64_t> keys);

}  // namespace hcsnet
