#pragma once

#include <cstdint>

namespace dlmath {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent random stream identified by (base, a, b).
/// Used so that per-episode and per-iteration streams do not depend on
/// how work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(base ^ splitmix64(a ^ splitmix64(b + 0x2545f4914f6cdd1dULL)));
}

}  // namespace dlmath
