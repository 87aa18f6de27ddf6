#pragma once

// Off-circuit signature schemes over the embedded curve. Schnorr signs the
// algebraic provenance digest (what the ledger pre-check and the in-circuit
// gadget consume); ECDSA signs byte-level SHA-256 digests. Nonces are
// deterministic (hash of key material and message), so signing is a pure
// function and every signature is reproducible.

#include "ffs/bytes.hpp"
#include "ffs/curve.hpp"
#include "ffs/field.hpp"
#include "ffs/rng.hpp"

namespace ffsuite {

struct KeyPair {
    Scalar sk;
    CurvePoint pk;

    static KeyPair generate(Rng& rng);
    static KeyPair from_secret(const Scalar& sk);
};

struct SchnorrSignature {
    FieldDigest e;  // challenge
    Scalar s;       // response

    /// e (32B) || s (32B)
    std::array<uint8_t, 64> serialize() const;
    static SchnorrSignature deserialize(std::span<const uint8_t> data);
};

struct EcdsaSignature {
    Scalar r;
    Scalar s;

    /// r (32B) || s (32B)
    std::array<uint8_t, 64> serialize() const;
    static EcdsaSignature deserialize(std::span<const uint8_t> data);
};

SchnorrSignature schnorr_sign(const KeyPair& kp, const FieldDigest& msg);
bool schnorr_verify(const CurvePoint& pk, const SchnorrSignature& sig, const FieldDigest& msg);

EcdsaSignature ecdsa_sign(const KeyPair& kp, const Digest& msg);
bool ecdsa_verify(const CurvePoint& pk, const Digest& msg, const EcdsaSignature& sig);

}  // namespace ffsuite
