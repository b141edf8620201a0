#pragma once

#include <cstdint>
#include <vector>

#include "adaptba/random.hpp"

namespace adaptba {

enum class Execution { Serial, Parallel };

/// Evaluates fn(index, rng) for index in [0, n), where rng is the stream
/// make_stream(seed, index). Results are stored by index, so the output is
/// the same for every thread count and schedule.
template <class Fn>
auto map_streams_serial(std::int64_t n, std::uint64_t seed, Fn&& fn) {
    using R = decltype(fn(std::int64_t{0}, std::declval<Rng&>()));
    std::vector<R> out(static_cast<std::size_t>(n));
    for (std::int64_t idx = 0; idx < n; ++idx) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(idx));
        out[static_cast<std::size_t>(idx)] = fn(idx, rng);
    }
    return out;
}

template <class Fn>
auto map_streams_parallel(std::int64_t n, std::uint64_t seed, Fn&& fn) {
    using R = decltype(fn(std::int64_t{0}, std::declval<Rng&>()));
    std::vector<R> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t idx = 0; idx < n; ++idx) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(idx));
        out[static_cast<std::size_t>(idx)] = fn(idx, rng);
    }
    return out;
}

template <class Fn>
auto map_streams(Execution exec, std::int64_t n, std::uint64_t seed, Fn&& fn) {
    return exec == Execution::Serial ? map_streams_serial(n, seed, fn) : map_streams_parallel(n, seed, fn);
}

/// Deterministic parallel map over plain indices (no randomness).
template <class Fn>
auto map_indices(Execution exec, std::int64_t n, Fn&& fn) {
    using R = decltype(fn(std::int64_t{0}));
    std::vector<R> out(static_cast<std::size_t>(n));
    if (exec == Execution::Serial) {
        for (std::int64_t idx = 0; idx < n; ++idx) out[static_cast<std::size_t>(idx)] = fn(idx);
        return out;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t idx = 0; idx < n; ++idx) out[static_cast<std::size_t>(idx)] = fn(idx);
    return out;
}

}  // namespace adaptba
