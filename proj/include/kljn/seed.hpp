#pragma once

#include <cstdint>

namespace kljn {

/// Deterministic 64-bit seed. Every random quantity in the library is a pure
/// function of one of these.
struct Seed {
    std::uint64_t value = 0;

    friend constexpr bool operator==(Seed, Seed) = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based split: the child for (index, stream) depends only on the
/// parent and the counters, never on the order children are requested in.
constexpr Seed derive_seed(Seed parent, std::uint64_t index, std::uint64_t stream = 0) noexcept {
    return Seed{mix64(mix64(parent.value ^ mix64(index)) + stream * 0xd1b54a32d192ed03ULL)};
}

}  // namespace kljn
