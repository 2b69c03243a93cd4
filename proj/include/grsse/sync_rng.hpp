// Synchronized pseudo-randomness shared by encoder and decoder. The stream,
// the bounded-draw rejection rule and the Fisher-Yates draw order are all
// part of the wire contract: both sides must consume identical draws.
#pragma once

#include "grsse/field.hpp"

#include <cstdint>
#include <vector>

namespace grsse {

// SplitMix64 with the reference constants.
class SyncRng {
public:
    explicit SyncRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, bound): rejects raw words below 2^64 mod bound.
    // Retries consume stream positions on both sides identically.
    uint64_t below(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound;
        uint64_t u;
        do {
            u = next();
        } while (u < threshold);
        return u % bound;
    }

    uint64_t state() const { return state_; }

private:
    uint64_t state_;
};

struct CommonDraw {
    PermutationMatrix perm;
    std::vector<uint8_t> offset;  // B, one symbol per check row (may be empty)
};

// Draw schedule per iteration: Fisher-Yates swaps for indices n-1 .. 1, then
// n_minus_k symbol draws for B. Exactly this order, nothing else.
inline CommonDraw draw_common_randomness(SyncRng& rng, uint32_t q, uint32_t n,
                                         uint32_t n_minus_k) {
    std::vector<uint32_t> perm(n);
    for (uint32_t i = 0; i < n; ++i) perm[i] = i;
    for (uint32_t i = n - 1; i >= 1; --i) {
        const uint64_t j = rng.below(i + 1);
        std::swap(perm[i], perm[j]);
    }
    std::vector<uint8_t> offset(n_minus_k);
    for (uint32_t r = 0; r < n_minus_k; ++r)
        offset[r] = static_cast<uint8_t>(rng.below(q));
    return {PermutationMatrix(std::move(perm)), std::move(offset)};
}

}  // namespace grsse
