#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ofdmse {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; a bijective avalanche mix of one 64-bit word.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a path of
/// counters (e.g. {purpose, trial}). The result depends only on its inputs,
/// never on which worker asks for it.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t v : path) h = splitmix64(h ^ splitmix64(v + 0x632BE59BD9B4E019ull));
    return h;
}

inline Engine make_engine(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Engine(derive_seed(master, path));
}

}  // namespace ofdmse
