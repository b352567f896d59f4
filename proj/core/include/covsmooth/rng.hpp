#pragma once

#include <bit>
#include <cstdint>

namespace covsmooth {

/// SplitMix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and up to three
/// indices. Pure function, so parallel runs keyed by (replicate, cell)
/// reproduce identically regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(base ^ 0x243f6a8885a308d3ULL);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

/// Bit pattern of a double, for seeding streams keyed by a real parameter
/// (e.g. a missing-edge fraction) rather than a grid index.
inline std::uint64_t seed_bits(double value) {
    return std::bit_cast<std::uint64_t>(value);
}

} // namespace covsmooth
