#include "ffs/sign.hpp"

#include "ffs/sha256.hpp"
#include "ffs/sponge.hpp"

namespace ffsuite {

namespace {

// Deterministic nonce: sha256(sk || msg || "FFS-NONCE") mod q; retries append
// a u32-BE counter (never taken in practice, kept for totality).
Scalar derive_nonce(const Scalar& sk, std::span<const uint8_t> msg_bytes) {
    for (uint32_t attempt = 0;; ++attempt) {
        Sha256 h;
        auto skb = sk.to_bytes();
        h.update(skb);
        h.update(msg_bytes);
        h.update("FFS-NONCE");
        if (attempt > 0) h.update_u32_be(attempt);
        Scalar k = Scalar::from_bytes_mod(h.finalize());
        if (!k.is_zero()) return k;
    }
}

FieldDigest schnorr_challenge(const CurvePoint& r, const CurvePoint& pk, const FieldDigest& msg) {
    const FieldElement transcript[5] = {r.x(), r.y(), pk.x(), pk.y(), msg};
    return sponge_hash(std::span<const FieldElement>(transcript, 5));
}

// Field residues and scalars share a canonical integer form; crossing between
// the two moduli goes through that integer, reduced into the target field.
Scalar to_scalar(const FieldElement& e) { return Scalar::from_u256_mod(e.canonical()); }

std::array<uint8_t, 64> cat64(const std::array<uint8_t, 32>& a, const std::array<uint8_t, 32>& b) {
    std::array<uint8_t, 64> out;
    std::copy(a.begin(), a.end(), out.begin());
    std::copy(b.begin(), b.end(), out.begin() + 32);
    return out;
}

}  // namespace

KeyPair KeyPair::generate(Rng& rng) { return from_secret(rng.nonzero_scalar()); }

KeyPair KeyPair::from_secret(const Scalar& sk) {
    if (sk.is_zero()) throw Error(Errc::InvalidPoint, "zero private key");
    return KeyPair{sk, scalar_mul(sk, derive_generator())};
}

std::array<uint8_t, 64> SchnorrSignature::serialize() const {
    return cat64(e.to_bytes(), s.to_bytes());
}

SchnorrSignature SchnorrSignature::deserialize(std::span<const uint8_t> data) {
    if (data.size() != 64) throw Error(Errc::DeserializeError, "schnorr signature is 64 bytes");
    return {FieldDigest::from_bytes(data.subspan(0, 32)), Scalar::from_bytes(data.subspan(32, 32))};
}

std::array<uint8_t, 64> EcdsaSignature::serialize() const {
    return cat64(r.to_bytes(), s.to_bytes());
}

EcdsaSignature EcdsaSignature::deserialize(std::span<const uint8_t> data) {
    if (data.size() != 64) throw Error(Errc::DeserializeError, "ecdsa signature is 64 bytes");
    return {Scalar::from_bytes(data.subspan(0, 32)), Scalar::from_bytes(data.subspan(32, 32))};
}

SchnorrSignature schnorr_sign(const KeyPair& kp, const FieldDigest& msg) {
    Scalar k = derive_nonce(kp.sk, msg.to_bytes());
    CurvePoint r = scalar_mul(k, derive_generator());
    FieldDigest e = schnorr_challenge(r, kp.pk, msg);
    Scalar s = k - to_scalar(e) * kp.sk;
    return {e, s};
}

bool schnorr_verify(const CurvePoint& pk, const SchnorrSignature& sig, const FieldDigest& msg) {
    if (!pk.is_on_curve()) throw Error(Errc::InvalidPoint, "public key off-curve");
    if (pk.is_infinity()) return false;
    CurvePoint r = point_add(scalar_mul(sig.s, derive_generator()),
                             scalar_mul(to_scalar(sig.e), pk));
    if (r.is_infinity()) return false;
    return schnorr_challenge(r, pk, msg) == sig.e;
}

EcdsaSignature ecdsa_sign(const KeyPair& kp, const Digest& msg) {
    Scalar h = Scalar::from_bytes_mod(msg);
    for (uint32_t attempt = 0;; ++attempt) {
        Sha256 nh;
        auto skb = kp.sk.to_bytes();
        nh.update(skb);
        nh.update(msg);
        nh.update("FFS-NONCE");
        if (attempt > 0) nh.update_u32_be(attempt);
        Scalar k = Scalar::from_bytes_mod(nh.finalize());
        if (k.is_zero()) continue;
        CurvePoint p1 = scalar_mul(k, derive_generator());
        Scalar r = Scalar::from_u256_mod(p1.x().canonical());
        if (r.is_zero()) continue;
        Scalar s = k.inverse() * (h + kp.sk * r);
        if (s.is_zero()) continue;
        return {r, s};
    }
}

bool ecdsa_verify(const CurvePoint& pk, const Digest& msg, const EcdsaSignature& sig) {
    if (!pk.is_on_curve()) throw Error(Errc::InvalidPoint, "public key off-curve");
    if (pk.is_infinity()) return false;
    if (sig.r.is_zero() || sig.s.is_zero()) return false;
    Scalar w = sig.s.inverse();
    Scalar u1 = Scalar::from_bytes_mod(msg) * w;
    Scalar u2 = sig.r * w;
    CurvePoint p1 = point_add(scalar_mul(u1, derive_generator()), scalar_mul(u2, pk));
    if (p1.is_infinity()) return false;
    return Scalar::from_u256_mod(p1.x().canonical()) == sig.r;
}

}  // namespace ffsuite
