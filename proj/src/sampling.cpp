#include "qgfit/sampling.hpp"

#include <cmath>

namespace qgfit {

namespace {

constexpr std::uint64_t kGamma64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace

std::uint64_t SeededStream::next_u64() {
    ++counter;
    return mix64(seed + counter * kGamma64);
}

double SeededStream::next_u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

SeededStream substream(std::uint64_t seed, std::uint64_t label) {
    return SeededStream(mix64(mix64(seed + kGamma64) + label * kGamma64));
}

std::vector<double> sample_q_gaussian(const QGaussianParams& p, std::size_t n,
                                      SeededStream& stream) {
    const double qprime = (1.0 + p.q) / (3.0 - p.q);
    const double beta0 = 1.0 / (3.0 - p.q);
    const double scale = std::sqrt(beta0 / p.beta);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // u1 in (0, 1] so the q-log stays finite; u2 in [0, 1).
        const double u1 = 1.0 - stream.next_u01();
        const double u2 = stream.next_u01();
        const double r = std::sqrt(-2.0 * q_log(u1, qprime));
        const double z = r * std::cos(2.0 * M_PI * u2);
        out[i] = p.mean + scale * z;
    }
    return out;
}

} // namespace qgfit
