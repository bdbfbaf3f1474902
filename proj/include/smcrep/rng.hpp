#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace smcrep {

/// Engine used for every random stream in the library.
using Engine = std::mt19937_64;

/// SplitMix64 finaliser; used to fold stream coordinates into a seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic engine for the stream addressed by (seed, path...).
///
/// Streams with different paths are statistically independent, so trials,
/// particles and generations can each own a stream and run in any order
/// (or in parallel) without changing results.
Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Uniform integer in [0, n). Portable across standard libraries.
std::uint64_t uniform_index(Engine& rng, std::uint64_t n);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Engine& rng);

/// Named stream tags so call sites read as intent rather than magic numbers.
namespace stream {
inline constexpr std::uint64_t diagram = 0x6469616772616dULL;
inline constexpr std::uint64_t trial = 0x747269616cULL;
inline constexpr std::uint64_t particle = 0x7061727469636cULL;
inline constexpr std::uint64_t resample = 0x726573616d706cULL;
inline constexpr std::uint64_t tree = 0x74726565ULL;
inline constexpr std::uint64_t base = 0x62617365ULL;
inline constexpr std::uint64_t replication = 0x7265706cULL;
}  // namespace stream

}  // namespace smcrep
