#pragma once

#include <cstdint>
#include <random>

namespace adaptba {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to decorrelate (seed, stream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for work unit `stream` under a global seed. The
/// result depends only on (seed, stream), never on which thread asks.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{splitmix64(seed), splitmix64(stream ^ 0xd1b54a32d192ed03ULL),
                      splitmix64(seed + stream)};
    return Rng(seq);
}

}  // namespace adaptba
