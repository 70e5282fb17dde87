#pragma once

#include <cstdint>

namespace tnn {

// SplitMix64: a counter-based generator, so independent streams are obtained
// by deriving seeds rather than by sharing state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi] by rejection, identical on every platform.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do { r = next(); } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    bool coin(int num = 1, int den = 2) { return uniform(0, den - 1) < num; }

private:
    std::uint64_t state_;
};

// Seed of the index-th independent stream below `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return g.next();
}

} // namespace tnn
