#pragma once

// Seeded deterministic generator (xoshiro256**) used wherever the toolkit
// samples: prover randomness, key generation, test data. Reproducible runs
// come from seeding this, never from std::random_device directly.

#include <cstdint>

#include "ffs/bytes.hpp"
#include "ffs/field.hpp"

namespace ffsuite {

class Rng {
public:
    explicit Rng(uint64_t seed) {
        // SplitMix64 expansion of the seed into the xoshiro state
        uint64_t x = seed;
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            s = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        uint64_t* s = state_;
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    /// Uniform in [0, n) via rejection.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    Bytes bytes(size_t n) {
        Bytes out(n);
        for (size_t i = 0; i < n; ++i) {
            if (i % 8 == 0) buf_ = next_u64();
            out[i] = uint8_t(buf_ >> (8 * (i % 8)));
        }
        return out;
    }

    Digest digest() {
        Digest d;
        auto b = bytes(32);
        std::copy(b.begin(), b.end(), d.begin());
        return d;
    }

    template <typename F>
    F field() {
        U256 v;
        for (auto& w : v.w) w = next_u64();
        return F::from_u256_mod(v);
    }

    FieldElement field_element() { return field<FieldElement>(); }
    Scalar scalar() { return field<Scalar>(); }

    /// Nonzero scalar, for private keys.
    Scalar nonzero_scalar() {
        for (;;) {
            Scalar s = scalar();
            if (!s.is_zero()) return s;
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
    uint64_t buf_ = 0;
};

}  // namespace ffsuite
