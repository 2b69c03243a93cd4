// Unbiased bounded draws from deterministic generators. mt19937_64 output is
// fully specified by the standard, so these are reproducible across platforms.
#pragma once

#include "grsse/numeric.hpp"

#include <cstdint>
#include <random>

namespace grsse {

// Uniform in [0, bound) by rejection on raw 64-bit words (no modulo bias).
template <class Rng>
uint64_t draw_below(Rng& rng, uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("draw_below: zero bound");
    const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    uint64_t u;
    do {
        u = rng();
    } while (u < threshold);
    return u % bound;
}

// Uniform in [0, 1) with 53 random bits.
template <class Rng>
double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, bound) for arbitrary-precision bounds.
template <class Rng>
BigInt draw_big_below(Rng& rng, const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("draw_big_below: nonpositive bound");
    if (bound <= std::numeric_limits<uint64_t>::max())
        return BigInt(draw_below(rng, bound.convert_to<uint64_t>()));
    const size_t bits = boost::multiprecision::msb(bound) + 1;
    const size_t words = (bits + 63) / 64;
    while (true) {
        BigInt x = 0;
        for (size_t i = 0; i < words; ++i) x = (x << 64) | BigInt(rng());
        x >>= words * 64 - bits;
        if (x < bound) return x;
    }
}

using LocalRng = std::mt19937_64;

}  // namespace grsse
