// Seed derivation for independent per-trial random streams.
//
// Every stochastic quantity in a run is a pure function of (base seed,
// stream label, trial index), so results do not depend on thread count or
// execution order. Streams are std::mt19937_64 seeded via splitmix64.
#pragma once

#include <cstdint>
#include <random>

#include "polarbd/util.hpp"

namespace polarbd {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t base_seed, std::uint64_t stream, std::uint64_t trial) {
    std::uint64_t s = splitmix64(base_seed ^ splitmix64(stream));
    s = splitmix64(s ^ trial);
    return std::mt19937_64(s);
}

inline BitVec random_bits(std::mt19937_64& rng, std::size_t n) {
    BitVec v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return v;
}

}  // namespace polarbd
