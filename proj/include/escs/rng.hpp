/**
 * @file rng.hpp
 * @brief Seeded random streams.
 *
 * Every stochastic component draws from its own stream, derived from the
 * global seed and a stream index (a vertex id, an incident index, ...), so a
 * run is reproducible no matter in which order streams are consumed.
 */
#pragma once

#include <cstdint>
#include <random>

namespace escs {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream) {
    return splitmix64(splitmix64(base_seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

inline Rng make_stream(std::uint64_t base_seed, std::uint64_t stream) {
    return Rng{stream_seed(base_seed, stream)};
}

// Stream namespaces, so that vertex streams never collide with generator streams.
inline constexpr std::uint64_t kVertexStreamBase = 0;
inline constexpr std::uint64_t kIncidentStreamBase = 1ULL << 62;
inline constexpr std::uint64_t kNetworkStream = (1ULL << 62) - 1;
inline constexpr std::uint64_t kPrimaryStream = (1ULL << 62) - 2;

}  // namespace escs
