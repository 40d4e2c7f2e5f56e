#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace aos {

/// Seeded generator with library-independent draws.
///
/// std::uniform_*_distribution output differs between standard libraries, so
/// the draws used by the solver are implemented here on top of the raw
/// mt19937_64 stream. Same seed, same sequence, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer applied to base + index; used to derive per-run seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace aos
