#pragma once

// Transparent zero-knowledge backend: 3-party MPC-in-the-head over the
// circuit IR, made non-interactive by a deterministic challenge derivation.
//
// Per repetition the prover secret-shares every injected wire (private
// inputs and hints) into three additive shares, evaluates the circuit
// share-wise (linear gates locally, multiplication via the cross-term rule
// z_i = x_i y_i + x_{i+1} y_i + x_i y_{i+1} + r_i - r_{i+1}), commits to the
// three party views, and opens the two views the challenge designates. One
// corrupted party transition survives a repetition with probability 2/3, so
// t repetitions give soundness error (2/3)^t.
//
// Views serialize canonically (tape seed, input shares in injected-wire
// order, multiplication outputs in gate order); commitments are
// sha256(key || view bytes).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ffs/circuit.hpp"
#include "ffs/rng.hpp"
#include "ffs/sha256.hpp"

namespace ffsuite {

struct SoundnessTarget {
    uint32_t kappa = 40;
};

/// Smallest t with (2/3)^t <= 2^-kappa, by exact integer comparison.
uint32_t reps_for_soundness(uint32_t kappa);

/// Tape domains for deriving per-party pseudorandomness from a view seed.
enum class TapeDomain : uint8_t { InputShare = 0, MulRandom = 1 };

/// tape(seed, domain, index) = sha256(seed || domain || index) mod p.
FieldElement tape_field(const Digest& seed, TapeDomain domain, uint64_t index);

struct ProofView {
    Digest key;   // commitment key, hiding
    Digest seed;  // tape seed
    std::vector<FieldElement> input_shares;  // injected wires, wire order
    std::vector<FieldElement> mul_shares;    // multiplication outputs, gate order

    Bytes canonical_bytes() const;
    Digest commitment() const;
};

struct ProofRepetition {
    std::array<Digest, 3> commitments;
    // one triple of shares per AssertZero wire, in gate order
    std::vector<std::array<FieldElement, 3>> output_shares;
    uint8_t opened = 0;  // opened pair is (opened, opened+1 mod 3)
    std::array<ProofView, 2> views;
};

struct Proof {
    uint16_t version = 1;
    Digest circuit_id{};
    Digest publics_hash{};
    uint32_t injected_count = 0;
    uint32_t mul_count = 0;
    uint32_t output_count = 0;
    std::vector<ProofRepetition> repetitions;

    /// Binary layout: "FFSP" | version u16 | t u16 | circuit_id | publics
    /// hash | counts u32 x3 | repetition records. Little-endian integers.
    Bytes serialize() const;
    static Proof deserialize(std::span<const uint8_t> data);
};

/// Per-repetition challenges in {0,1,2} derived from the whole transcript.
std::vector<uint8_t> fiat_shamir(const Digest& circuit_id, const PublicInputs& publics,
                                 std::span<const ProofRepetition> repetitions);

enum class RejectReason {
    HeaderMismatch,
    CommitmentMismatch,
    GateInconsistency,
    OutputMismatch,
    ChallengeMismatch,
};

const char* reject_reason_name(RejectReason r);

struct VerifyResult {
    bool accepted = false;
    RejectReason reason = RejectReason::HeaderMismatch;
    std::string detail;

    explicit operator bool() const { return accepted; }

    static VerifyResult accept() { return {true, RejectReason::HeaderMismatch, ""}; }
    static VerifyResult reject(RejectReason r, std::string d) {
        return {false, r, std::move(d)};
    }
};

/// Refuses unsatisfied witnesses (UnsatisfiedWitness) before emitting any
/// transcript bytes. Repetitions may be computed on `threads` workers; the
/// proof bytes are identical for any thread count.
Proof prove(const Circuit& c, const Witness& w, const PublicInputs& publics,
            SoundnessTarget target, Rng& rng, unsigned threads = 1);

VerifyResult verify(const Circuit& c, const PublicInputs& publics, const Proof& proof);

}  // namespace ffsuite
