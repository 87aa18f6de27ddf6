#pragma once

// 256-bit unsigned integers as 4 x 64-bit little-endian limbs. Substrate for
// the two prime fields; nothing here knows about moduli.

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "ffs/bytes.hpp"

namespace ffsuite {

struct U256 {
    uint64_t w[4];

    constexpr U256() : w{0, 0, 0, 0} {}
    constexpr explicit U256(uint64_t v) : w{v, 0, 0, 0} {}
    constexpr U256(uint64_t l0, uint64_t l1, uint64_t l2, uint64_t l3) : w{l0, l1, l2, l3} {}

    constexpr bool is_zero() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }

    constexpr bool operator==(const U256& o) const {
        return w[0] == o.w[0] && w[1] == o.w[1] && w[2] == o.w[2] && w[3] == o.w[3];
    }
    constexpr bool operator!=(const U256& o) const { return !(*this == o); }

    constexpr bool operator<(const U256& o) const {
        for (int i = 3; i >= 0; --i) {
            if (w[i] != o.w[i]) return w[i] < o.w[i];
        }
        return false;
    }
    constexpr bool operator>=(const U256& o) const { return !(*this < o); }

    constexpr bool bit(int i) const { return (w[i / 64] >> (i % 64)) & 1; }

    constexpr int bit_length() const {
        for (int i = 3; i >= 0; --i) {
            if (w[i] != 0) {
                int n = 0;
                uint64_t v = w[i];
                while (v) {
                    ++n;
                    v >>= 1;
                }
                return i * 64 + n;
            }
        }
        return 0;
    }
};

// a + b, carry out discarded by callers that know it cannot happen
constexpr U256 u256_add(const U256& a, const U256& b) {
    U256 r;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 s = (unsigned __int128)a.w[i] + b.w[i] + carry;
        r.w[i] = uint64_t(s);
        carry = s >> 64;
    }
    return r;
}

constexpr bool u256_add_overflows(const U256& a, const U256& b) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 s = (unsigned __int128)a.w[i] + b.w[i] + carry;
        carry = s >> 64;
    }
    return carry != 0;
}

constexpr U256 u256_sub(const U256& a, const U256& b) {
    U256 r;
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 d = (unsigned __int128)a.w[i] - b.w[i] - borrow;
        r.w[i] = uint64_t(d);
        borrow = (d >> 64) & 1;
    }
    return r;
}

constexpr U256 u256_shl1(const U256& a) {
    U256 r;
    uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
        r.w[i] = (a.w[i] << 1) | carry;
        carry = a.w[i] >> 63;
    }
    return r;
}

constexpr U256 u256_shr1(const U256& a) {
    U256 r;
    uint64_t carry = 0;
    for (int i = 3; i >= 0; --i) {
        r.w[i] = (a.w[i] >> 1) | (carry << 63);
        carry = a.w[i] & 1;
    }
    return r;
}

// a * b -> 512 bits in 8 limbs
constexpr void u256_mul_wide(const U256& a, const U256& b, uint64_t out[8]) {
    for (int i = 0; i < 8; ++i) out[i] = 0;
    for (int i = 0; i < 4; ++i) {
        uint64_t carry = 0;
        for (int j = 0; j < 4; ++j) {
            unsigned __int128 t = (unsigned __int128)a.w[i] * b.w[j] + out[i + j] + carry;
            out[i + j] = uint64_t(t);
            carry = uint64_t(t >> 64);
        }
        out[i + 4] = carry;
    }
}

// x mod m for x < 16*m (enough for digest reduction against 254-bit moduli)
constexpr U256 u256_mod_small(U256 x, const U256& m) {
    while (x >= m) x = u256_sub(x, m);
    return x;
}

// Euclidean division by a 64-bit divisor.
constexpr void u256_divmod_u64(const U256& a, uint64_t d, U256& q, uint64_t& r) {
    unsigned __int128 rem = 0;
    for (int i = 3; i >= 0; --i) {
        unsigned __int128 cur = (rem << 64) | a.w[i];
        q.w[i] = uint64_t(cur / d);
        rem = cur % d;
    }
    r = uint64_t(rem);
}

inline std::array<uint8_t, 32> u256_to_be_bytes(const U256& a) {
    std::array<uint8_t, 32> out{};
    for (int i = 0; i < 4; ++i) {
        uint64_t v = a.w[3 - i];
        for (int j = 0; j < 8; ++j) out[i * 8 + j] = uint8_t(v >> (56 - 8 * j));
    }
    return out;
}

inline U256 u256_from_be_bytes(std::span<const uint8_t> b) {
    if (b.size() != 32) throw Error(Errc::DeserializeError, "expected 32 bytes");
    U256 a;
    for (int i = 0; i < 4; ++i) {
        uint64_t v = 0;
        for (int j = 0; j < 8; ++j) v = (v << 8) | b[i * 8 + j];
        a.w[3 - i] = v;
    }
    return a;
}

/// Minimal lowercase hex, "0" for zero.
inline std::string u256_to_hex(const U256& a) {
    auto bytes = u256_to_be_bytes(a);
    size_t first = 0;
    while (first + 1 < bytes.size() && bytes[first] == 0) ++first;
    std::string s = to_hex(std::span<const uint8_t>(bytes.data() + first, bytes.size() - first));
    if (s.size() > 1 && s[0] == '0') s.erase(0, 1);
    return s;
}

inline U256 u256_from_hex(const std::string& s) {
    if (s.empty() || s.size() > 64) throw Error(Errc::ParseError, "bad u256 hex length");
    std::string padded(64 - s.size(), '0');
    padded += s;
    return u256_from_be_bytes(from_hex(padded));
}

}  // namespace ffsuite
