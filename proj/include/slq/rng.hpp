#ifndef SLQ_RNG_HPP
#define SLQ_RNG_HPP

#include <cstdint>
#include <random>

namespace slq {

/// SplitMix64 mixing step. Used to derive independent substream seeds from a
/// single user-facing seed, so every randomized routine in the library can be
/// replayed from one number.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of master seed `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream ^ 0xd1b54a32d192ed03ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(derive_seed(seed, stream));
}

}  // namespace slq

#endif
