#pragma once

#include <cstdint>
#include <random>

namespace hdanova {

// Splittable substreams: a root seed plus up to three stream indices are
// hashed (SplitMix64 finalizer chain) into an independent mt19937_64 seed.
// Any (root, i, j, k) tuple therefore names the same stream no matter which
// thread, or in which order, it is instantiated — the contract behind the
// parallel-equals-serial reproducibility guarantees.

namespace detail {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

inline std::uint64_t stream_seed(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = detail::splitmix64(root);
    h = detail::splitmix64(h ^ (a + detail::kGamma));
    h = detail::splitmix64(h ^ (b + 2 * detail::kGamma));
    h = detail::splitmix64(h ^ (c + 3 * detail::kGamma));
    return h;
}

inline std::mt19937_64 make_stream(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
    return std::mt19937_64(stream_seed(root, a, b, c));
}

// Stream-index tags keeping unrelated draws on unrelated substreams.
enum class StreamPurpose : std::uint64_t {
    PanelNoise = 1,
    MeanShift = 2,
    BootstrapWeights = 3,
    ReplicateSeed = 4,
};

inline std::uint64_t purpose_tag(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

}  // namespace hdanova
