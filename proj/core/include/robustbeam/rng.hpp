// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-contained deterministic random number generator. The standard
// library's distribution objects are implementation-defined, so identical
// seeds would give different streams under different standard libraries;
// everything here is pinned down to exact integer arithmetic plus fixed
// floating-point formulas, which keeps seeded experiment output and test
// fixtures reproducible.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace robustbeam {

// splitmix64 step; used for seeding and for deriving independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives the seed for an independent stream (e.g. one per trial index)
// from a base seed. Two different stream ids give decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256++ by Blackman and Vigna; public-domain reference algorithm.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64(sm);
        }
        // A few warm-up draws so near-zero seeds leave the low-weight
        // initial state before any output is consumed.
        for (int i = 0; i < 8; ++i) {
            next_u64();
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in (0, 1]; safe as a log() argument.
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the spare value is cached so a pair
    // of draws costs one log and one sincos.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Circularly symmetric complex Gaussian with unit variance:
    // real and imaginary parts are independent N(0, 1/2).
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.70710678118654752440, im * 0.70710678118654752440};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace robustbeam
