#pragma once

/*
 * SplitMix64 is the single entropy source for every seeded artifact, chosen
 * so test corpora can be regenerated bit-identically from any language.
 *
 * Conventions (all fixed, relied on by the file formats and sweeps):
 *   - uniform():  top 53 bits of the next output, scaled to [0, 1).
 *   - normal():   Box-Muller, two uniforms per call, cosine branch only:
 *                 sqrt(-2 ln(1-u1)) * cos(2 pi u2).
 *   - exponential(): inverse CDF, -ln(1 - uniform()).
 *   - substream_seed(seed, k): the (k+1)-th raw output of SplitMix64(seed);
 *                 party/term k of a seeded generator draws from a fresh
 *                 SplitMix64 with that seed.
 */

#include <cmath>
#include <cstdint>

namespace mumsep {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal. Consumes exactly two uniforms.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * M_PI * u2);
    }

    // Exp(1) variate.
    double exponential() { return -std::log1p(-uniform()); }

    static std::uint64_t substream_seed(std::uint64_t seed, int index) {
        SplitMix64 g(seed);
        std::uint64_t s = 0;
        for (int i = 0; i <= index; ++i) s = g.next_u64();
        return s;
    }

private:
    std::uint64_t state_;
};

}  // namespace mumsep
