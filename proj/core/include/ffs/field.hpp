#pragma once

// Prime-field arithmetic in Montgomery form over the two protocol moduli:
//   FieldElement — the circuit field F_p (also the embedded curve's base field)
//   Scalar       — integers mod q, the embedded curve's group order
// All parameters derive from the modulus at compile time; nothing is
// transcribed from external tables.

#include <optional>

#include "ffs/error.hpp"
#include "ffs/u256.hpp"

namespace ffsuite {

namespace detail {

constexpr U256 add_mod(const U256& a, const U256& b, const U256& m) {
    // a, b < m < 2^255 so the raw sum cannot wrap 256 bits
    U256 s = u256_add(a, b);
    if (s >= m) s = u256_sub(s, m);
    return s;
}

constexpr U256 dbl_mod(const U256& a, const U256& m) { return add_mod(a, a, m); }

constexpr U256 mont_r(const U256& m) {
    U256 x(1);
    for (int i = 0; i < 256; ++i) x = dbl_mod(x, m);
    return x;
}

constexpr U256 modmul_schoolbook(const U256& a, const U256& b, const U256& m) {
    U256 z;
    for (int i = 255; i >= 0; --i) {
        z = dbl_mod(z, m);
        if (b.bit(i)) z = add_mod(z, a, m);
    }
    return z;
}

constexpr uint64_t mont_n0(const U256& m) {
    // Newton iteration for m^{-1} mod 2^64 (m odd), then negate.
    uint64_t inv = m.w[0];
    for (int i = 0; i < 5; ++i) inv *= 2 - m.w[0] * inv;
    return ~inv + 1;
}

}  // namespace detail

template <typename Params>
class Fp {
public:
    static constexpr U256 modulus = Params::modulus;
    static constexpr U256 mont_r = detail::mont_r(Params::modulus);
    static constexpr U256 mont_r2 =
        detail::modmul_schoolbook(mont_r, mont_r, Params::modulus);
    static constexpr uint64_t mont_n0 = detail::mont_n0(Params::modulus);

    constexpr Fp() : m_{} {}

    static Fp zero() { return Fp(); }
    static Fp one() { return from_raw(mont_r); }

    static Fp from_u64(uint64_t v) { return from_raw(mul_raw(U256(v), mont_r2)); }

    /// Reduces an arbitrary 256-bit integer into the field.
    static Fp from_u256_mod(const U256& v) {
        return from_raw(mul_raw(u256_mod_small(v, modulus), mont_r2));
    }

    /// Strict: input must already be canonical (< modulus).
    static Fp from_u256(const U256& v) {
        if (v >= modulus) throw Error(Errc::DeserializeError, "value not canonical");
        return from_raw(mul_raw(v, mont_r2));
    }

    static Fp from_bytes(std::span<const uint8_t> b) { return from_u256(u256_from_be_bytes(b)); }
    static Fp from_bytes_mod(std::span<const uint8_t> b) {
        return from_u256_mod(u256_from_be_bytes(b));
    }
    static Fp from_hex(const std::string& s) { return from_u256(u256_from_hex(s)); }

    U256 canonical() const {
        uint64_t t[8] = {m_.w[0], m_.w[1], m_.w[2], m_.w[3], 0, 0, 0, 0};
        return reduce(t);
    }

    std::array<uint8_t, 32> to_bytes() const { return u256_to_be_bytes(canonical()); }
    std::string to_hex() const { return u256_to_hex(canonical()); }

    bool is_zero() const { return m_.is_zero(); }
    bool operator==(const Fp& o) const { return m_ == o.m_; }
    bool operator!=(const Fp& o) const { return !(m_ == o.m_); }

    Fp operator+(const Fp& o) const { return from_raw(detail::add_mod(m_, o.m_, modulus)); }
    Fp operator-(const Fp& o) const {
        return from_raw(m_ >= o.m_ ? u256_sub(m_, o.m_)
                                   : u256_sub(u256_add(m_, modulus), o.m_));
    }
    Fp operator-() const { return is_zero() ? *this : from_raw(u256_sub(modulus, m_)); }
    Fp operator*(const Fp& o) const { return from_raw(mul_raw(m_, o.m_)); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    Fp square() const { return *this * *this; }

    Fp pow(const U256& e) const {
        Fp acc = one();
        Fp base = *this;
        int n = e.bit_length();
        for (int i = 0; i < n; ++i) {
            if (e.bit(i)) acc *= base;
            base = base.square();
        }
        return acc;
    }

    Fp inverse() const {
        if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
        return pow(u256_sub(modulus, U256(2)));
    }

    bool is_square() const {
        if (is_zero()) return true;
        U256 e = u256_shr1(u256_sub(modulus, U256(1)));
        return pow(e) == one();
    }

    /// Tonelli–Shanks; nullopt when no root exists.
    std::optional<Fp> sqrt() const {
        if (is_zero()) return zero();
        if (!is_square()) return std::nullopt;
        // modulus - 1 = 2^s * t with t odd
        U256 t = u256_sub(modulus, U256(1));
        int s = 0;
        while (!t.bit(0)) {
            t = u256_shr1(t);
            ++s;
        }
        // smallest quadratic non-residue
        Fp z = from_u64(2);
        while (z.is_square()) z += one();
        Fp c = z.pow(t);
        Fp x = pow(u256_shr1(u256_add(t, U256(1))));
        Fp w = pow(t);
        int m = s;
        while (w != one()) {
            int i = 0;
            Fp probe = w;
            while (probe != one()) {
                probe = probe.square();
                ++i;
            }
            Fp b = c;
            for (int j = 0; j < m - i - 1; ++j) b = b.square();
            x *= b;
            c = b.square();
            w *= c;
            m = i;
        }
        return x;
    }

    /// Montgomery-form accessor for hashing/serialization-free comparisons.
    const U256& raw() const { return m_; }

private:
    static Fp from_raw(const U256& r) {
        Fp f;
        f.m_ = r;
        return f;
    }

    static U256 reduce(uint64_t t[8]) {
        for (int i = 0; i < 4; ++i) {
            uint64_t k = t[i] * mont_n0;
            uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                unsigned __int128 s =
                    (unsigned __int128)k * modulus.w[j] + t[i + j] + carry;
                t[i + j] = uint64_t(s);
                carry = uint64_t(s >> 64);
            }
            for (int j = i + 4; j < 8 && carry; ++j) {
                unsigned __int128 s = (unsigned __int128)t[j] + carry;
                t[j] = uint64_t(s);
                carry = uint64_t(s >> 64);
            }
        }
        U256 r(t[4], t[5], t[6], t[7]);
        if (r >= modulus) r = u256_sub(r, modulus);
        return r;
    }

    static U256 mul_raw(const U256& a, const U256& b) {
        uint64_t t[8];
        u256_mul_wide(a, b, t);
        return reduce(t);
    }

    U256 m_;
};

// BN254 scalar field: the circuit field and the embedded curve's base field.
struct CircuitFieldParams {
    static constexpr U256 modulus{0x43e1f593f0000001ull, 0x2833e84879b97091ull,
                                  0xb85045b68181585dull, 0x30644e72e131a029ull};
};

// BN254 base field prime: the embedded (Grumpkin) curve's group order.
struct CurveOrderParams {
    static constexpr U256 modulus{0x3c208c16d87cfd47ull, 0x97816a916871ca8dull,
                                  0xb85045b68181585dull, 0x30644e72e131a029ull};
};

using FieldElement = Fp<CircuitFieldParams>;
using Scalar = Fp<CurveOrderParams>;

/// The provenance digest type: a canonical circuit-field element.
using FieldDigest = FieldElement;

}  // namespace ffsuite
