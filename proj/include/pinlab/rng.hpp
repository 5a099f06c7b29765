#pragma once

#include <cstdint>
#include <random>

namespace pinlab {

using Engine = std::mt19937_64;

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based child seed. The same (root, stream, index) always yields the
/// same seed, independent of the order in which tasks are scheduled.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) noexcept;

/// Stable 64-bit tag for a stream name (FNV-1a).
std::uint64_t stream_tag(const char* name) noexcept;

Engine make_engine(std::uint64_t seed);

/// Uniform on the open interval (0, 1), 53 random bits.
inline double uniform01(Engine& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace pinlab
