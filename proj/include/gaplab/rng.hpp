#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gaplab {

/// splitmix64 finalizer (Steele, Lea, Flood 2014).  Stateless mix used for
/// all seed derivation so that substreams are reproducible and independent
/// of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a path of integers.
/// The same (seed, path) always yields the same child, so per-edge and
/// per-trial streams do not depend on enumeration or thread schedule.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t w : path) s = splitmix64(s ^ splitmix64(w));
    return s;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace gaplab
