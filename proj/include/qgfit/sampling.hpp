#pragma once

#include "qgfit/qgaussian.hpp"

#include <cstdint>
#include <vector>

namespace qgfit {

// Counter-based uniform stream (SplitMix64 output function). The i-th draw
// depends only on (seed, i), so identical seeds replay bit-identically on
// any platform and streams can be split by seed without shared state.
struct SeededStream {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    explicit SeededStream(std::uint64_t seed_ = 0) : seed(seed_) {}

    std::uint64_t next_u64();
    // Uniform on [0, 1), 53-bit resolution.
    double next_u01();
};

// Derives an independent stream for a labeled subtask (delay index, trial
// index, ...) from a base seed. Plain SplitMix64 scramble of the pair.
SeededStream substream(std::uint64_t seed, std::uint64_t label);

// n q-Gaussian deviates via the generalized Box-Mueller construction:
// z = sqrt(-2 ln_{q'}(u1)) cos(2 pi u2) with companion index
// q' = (1+q)/(3-q) yields the shape at beta0 = 1/(3-q); the result is then
// rescaled to the target beta and shifted to the target mean.
// Two uniforms are consumed per deviate.
std::vector<double> sample_q_gaussian(const QGaussianParams& p, std::size_t n,
                                      SeededStream& stream);

} // namespace qgfit
