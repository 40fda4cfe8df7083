#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace trapwalk {

/// SplitMix64 step (Vigna's constants).  Used both as a generator and as the
/// mixing function for stream derivation.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based splittable generator.  Streams are derived purely from
/// (seed, key...) so replicate i can be generated independently of replicate
/// order or worker count.
struct Rng {
    uint64_t state = 0;

    Rng() = default;
    explicit Rng(uint64_t seed) : state(mix64(seed)) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// strictly positive exponential variate
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// uniform integer in [0, n)
    uint64_t uniform_int(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Poisson variate by inversion (means are small here; large means are
    /// split to keep exp(-mean) representable).
    uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        uint64_t total = 0;
        while (mean > 256.0) {
            total += poisson(mean / 2);
            mean /= 2;
        }
        double l = std::exp(-mean), p = 1.0;
        uint64_t k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > l);
        return total + k - 1;
    }
};

/// Derive an independent stream from a base seed and a key path.
inline Rng derive_stream(uint64_t seed, std::initializer_list<uint64_t> keys) {
    uint64_t h = mix64(seed);
    for (uint64_t k : keys) h = mix64(h ^ (k + 0x9E3779B97F4A7C15ULL));
    return Rng(h);
}

inline Rng derive_stream(uint64_t seed, const std::vector<uint64_t>& keys) {
    uint64_t h = mix64(seed);
    for (uint64_t k : keys) h = mix64(h ^ (k + 0x9E3779B97F4A7C15ULL));
    return Rng(h);
}

}  // namespace trapwalk
