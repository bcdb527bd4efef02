#pragma once

#include <cstdint>
#include <random>

namespace femto::sim {

// SplitMix64; used to whiten (base seed, stream) pairs into engine seeds so
// per-drop streams are independent of worker scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<unsigned>(splitmix64(seed ^ salt)),
                    static_cast<unsigned>(splitmix64(seed ^ salt) >> 32),
                    static_cast<unsigned>(splitmix64((seed ^ salt) + 1)),
                    static_cast<unsigned>(splitmix64((seed ^ salt) + 1) >> 32)};
  return std::mt19937_64(seq);
}

inline std::uint64_t drop_seed(std::uint64_t base_seed, std::uint64_t drop_index) {
  return splitmix64(base_seed ^ splitmix64(drop_index + 1));
}

}  // namespace femto::sim
