#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shearnet {

// (seed, stream) fully determines a noise realization.
struct NoiseSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const NoiseSeed&, const NoiseSeed&) = default;
};

// Combines a stream id from structured coordinates (cell, trial, purpose).
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts);

// Deterministic variate source. The engine is std::mt19937_64 seeded through
// std::seed_seq, both fully specified by the standard; uniforms and normals
// are derived here rather than through the implementation-defined
// std::*_distribution classes, so draws are identical across toolchains.
class RandomStream {
public:
    explicit RandomStream(NoiseSeed seed);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Uniform integer on [lo, hi] (inclusive), rejection sampled.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal via the Marsaglia polar method; the second variate of
    // each accepted pair is cached.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace shearnet
