#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "subperc/errors.hpp"

namespace subperc {

/// splitmix64 finalizer; also used as the mixing step for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a string, for folding experiment names into seeds.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Derive an independent substream seed from (master, index).
/// Used for per-site, per-replication and per-panel streams so that the
/// result does not depend on iteration order or worker count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
    return mix64(master + 0x9E3779B97F4A7C15ULL * (a + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

/// Map a signed lattice index to an unsigned stream index (zig-zag).
constexpr std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

/// Deterministic, cross-platform PRNG (splitmix64 stream) with the handful
/// of distributions the samplers need. std::random distributions are
/// implementation-defined, so everything here is hand-rolled on top of the
/// fixed integer stream; identical seeds give identical patterns on any
/// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return mix64(z);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Exponential with mean 1. uniform01() < 1 so the log argument is > 0.
    double exponential() { return -std::log(1.0 - uniform01()); }

    /// Exact Poisson draw via exponential inter-arrival times, O(mean).
    /// Stays in the log domain, so large means do not underflow.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw ParameterError("poisson: negative mean");
        if (mean == 0.0) return 0;
        std::uint64_t count = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++count;
            acc += exponential();
        }
        return count;
    }

    /// Binomial(n, p) by n Bernoulli trials (replica counts keep n small).
    std::uint32_t binomial(std::uint32_t n, double p) {
        std::uint32_t k = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            if (bernoulli(p)) ++k;
        return k;
    }

private:
    std::uint64_t state_;
};

/// Pre-assigned replication seeds: stable hash of (master seed, experiment
/// name, replication index). Parallel and serial runs agree by construction.
inline std::vector<std::uint64_t> make_replication_seeds(std::uint64_t master_seed,
                                                         std::string_view experiment,
                                                         std::size_t replications) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(replications);
    const std::uint64_t base = derive_seed(master_seed, fnv1a(experiment));
    for (std::size_t i = 0; i < replications; ++i)
        seeds.push_back(derive_seed(base, i));
    return seeds;
}

}  // namespace subperc
