#pragma once

#include <cstdint>
#include <limits>

namespace transim {

/// SplitMix64 generator. Small state, so every passenger gets its own stream
/// derived from (seed, key) and streams are never shared between passengers
/// or between concurrent simulation runs.
class RandomStream {
public:
    using result_type = std::uint64_t;

    constexpr explicit RandomStream(std::uint64_t seed = 0) : state_(seed) {}

    /// Independent stream for `key` under `seed`.
    static constexpr RandomStream derive(std::uint64_t seed, std::uint64_t key) {
        RandomStream mixer(seed ^ (key * 0xD1B54A32D192ED03ULL));
        mixer();
        return RandomStream(mixer() ^ key);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace transim
