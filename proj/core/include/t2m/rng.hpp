#pragma once

#include <cstdint>

#include "t2m/tensor.hpp"

namespace t2m {

// Deterministic PRNG with a fixed, build-independent algorithm:
// xoshiro256++ 1.0, state seeded from the 64-bit seed via splitmix64.
// Gaussian samples use the Box-Muller transform (polar-free, trig form)
// with one cached value. The std:: distributions are deliberately not
// used because their output is implementation-defined.
//
// Identical seeds yield identical sample streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Standard normal N(0, 1).
    double gaussian();
    // Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    // Derives an independent child seed, for per-sample / per-worker streams.
    std::uint64_t fork_seed();

private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

// splitmix64 step; used for seed derivation and exposed for mixing
// seed material (e.g. seed + sample index).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// i.i.d. N(0,1) samples in the given shape.
Tensor sample_gaussian(Rng& rng, std::vector<int> shape);

// In-place Fisher-Yates shuffle of an index permutation.
void shuffle_indices(Rng& rng, std::vector<std::size_t>& idx);

}  // namespace t2m
