#pragma once

#include <cstdint>

#include "sepind/hermitian_core.hpp"

namespace sepind {

/// Counter-based SplitMix64 stream. Output is a pure function of (seed, draw index),
/// identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal via Box-Muller.
    double normal();
    /// Independent child stream.
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t state_;
};

/// Hermitian matrix with independent standard-normal real/imaginary parts, symmetrized.
HermitianOperator random_hermitian(std::size_t dim, Rng& rng);

}  // namespace sepind
