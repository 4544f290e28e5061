#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace domlearn {

/// Seed for every generator in the library. Same seed + same parameters
/// gives bit-identical output on a given platform.
using RngSeed = std::uint64_t;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Derives an independent sub-stream seed from a master seed and a role
/// label. Streams for distinct roles never interact, so adding a new
/// consumer of randomness does not perturb existing ones.
inline RngSeed derive_seed(RngSeed master, std::string_view role) {
  return detail::splitmix64(master ^ detail::fnv1a64(role));
}

/// Role + integer indices (repetition, size, object index, ...).
template <class... Index>
inline RngSeed derive_seed(RngSeed master, std::string_view role, Index... index) {
  RngSeed s = derive_seed(master, role);
  ((s = detail::splitmix64(s ^ static_cast<std::uint64_t>(index))), ...);
  return s;
}

/// Role + a free-form tag (e.g. a classifier identifier) + indices.
template <class... Index>
inline RngSeed derive_seed_tagged(RngSeed master, std::string_view role,
                                  std::string_view tag, Index... index) {
  RngSeed s = derive_seed(master, role);
  s = detail::splitmix64(s ^ detail::fnv1a64(tag));
  ((s = detail::splitmix64(s ^ static_cast<std::uint64_t>(index))), ...);
  return s;
}

inline std::mt19937_64 make_engine(RngSeed seed) { return std::mt19937_64{seed}; }

}  // namespace domlearn
