#pragma once

#include <cstdint>
#include <random>

namespace forage {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds from a run seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream 0 is the environment (contention shuffles); stream j + 1 belongs to agent j.
inline Rng make_stream(std::uint64_t run_seed, std::uint64_t stream) {
    std::uint64_t s = splitmix64(run_seed);
    s = splitmix64(s ^ splitmix64(stream + 0xA5A5A5A5ULL));
    return Rng{s};
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
}

}  // namespace forage
