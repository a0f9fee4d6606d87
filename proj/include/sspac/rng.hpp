#pragma once

#include <cstdint>
#include <initializer_list>

namespace sspac {

/// SplitMix64 output function (Steele, Lea & Flood). Bijective 64-bit mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Hashes a master seed and a list of indices into an independent stream key.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t key = splitmix64_mix(master + kGoldenGamma);
    for (std::uint64_t i : indices)
        key = splitmix64_mix(key ^ splitmix64_mix(i + kGoldenGamma));
    return key;
}

/// k-th output (k = 0, 1, ...) of the SplitMix64 sequence started at `key`.
/// A pure function of (key, k), so draws do not depend on call interleaving.
constexpr std::uint64_t stream_at(std::uint64_t key, std::uint64_t k) {
    return splitmix64_mix(key + (k + 1) * kGoldenGamma);
}

/// Uniform double in [0,1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

} // namespace sspac
