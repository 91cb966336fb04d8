#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace spiderpcg {

/// Mixes a base seed with a list of coordinates into a new 64-bit seed.
/// SplitMix64 finalizer applied per coordinate, so (seed, 1, 2) and
/// (seed, 2, 1) yield unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords);

/// Deterministic random stream. All sampling is done from raw engine bits
/// so results are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of precision.
    double uniform01();

    /// Uniform integer on [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    /// Normal draw via Marsaglia's polar method.
    double normal(double mean, double stddev);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace spiderpcg
