#pragma once

// Test-side cheating prover for the soundness experiments. It targets the
// fixed statement "x*x = c" with a false public c: the honest share-wise
// evaluation leaves the assertion shares summing to the nonzero deficit
// D = x^2 - c, and the cheat patches exactly one randomly chosen party's
// recorded multiplication output (and the output share derived from it) by
// -D so the shares sum to zero again. Every other value, commitment, and
// challenge is produced honestly, so a repetition detects the cheat exactly
// when its challenge opens the corrupted party.
//
// Built directly on the proof wire format; it shares no code with prove().

#include "ffs/circuit.hpp"
#include "ffs/proof.hpp"
#include "ffs/rng.hpp"

namespace cheat {

struct Statement {
    ffsuite::Circuit circuit;
    ffsuite::PublicInputs publics;
    ffsuite::FieldElement x;  // witness value with x*x != c

    static Statement make(ffsuite::Rng& rng) {
        using namespace ffsuite;
        CircuitBuilder b;
        uint32_t x = b.add_input();
        uint32_t c = b.add_public("c");
        b.assert_equal(b.mul(x, x), c);
        Statement st{b.finalize(), PublicInputs{}, rng.field_element()};
        // claimed square off by a random nonzero delta
        FieldElement claimed = st.x.square() + FieldElement::from_u64(1 + rng.below(1000));
        st.publics.set("c", claimed);
        return st;
    }
};

/// One-corrupted-view strategy; returns a structurally honest proof for the
/// false statement. Detection probability per repetition is 1/3.
inline ffsuite::Proof prove_with_one_corruption(const Statement& st, uint32_t t,
                                                ffsuite::Rng& rng) {
    using namespace ffsuite;
    const FieldElement claimed = *st.publics.find("c");
    const FieldElement deficit = st.x.square() - claimed;

    Proof proof;
    proof.circuit_id = st.circuit.id();
    proof.publics_hash = st.publics.hash();
    proof.injected_count = 1;
    proof.mul_count = 1;
    proof.output_count = 1;
    proof.repetitions.resize(t);

    std::vector<std::array<ProofView, 3>> all_views(t);
    for (uint32_t j = 0; j < t; ++j) {
        ProofRepetition& rep = proof.repetitions[j];
        std::array<ProofView, 3>& views = all_views[j];
        for (auto& v : views) {
            v.key = rng.digest();
            v.seed = rng.digest();
        }

        // input shares of x: parties 0 and 1 from their tapes
        FieldElement xs[3];
        xs[0] = tape_field(views[0].seed, TapeDomain::InputShare, 0);
        xs[1] = tape_field(views[1].seed, TapeDomain::InputShare, 0);
        xs[2] = st.x - xs[0] - xs[1];
        for (int i = 0; i < 3; ++i) views[i].input_shares.push_back(xs[i]);

        // honest multiplication outputs
        FieldElement r[3], z[3];
        for (int i = 0; i < 3; ++i) r[i] = tape_field(views[i].seed, TapeDomain::MulRandom, 0);
        for (int i = 0; i < 3; ++i) {
            int k = (i + 1) % 3;
            z[i] = xs[i] * xs[i] + xs[k] * xs[i] + xs[i] * xs[k] + r[i] - r[k];
        }

        // corrupt one party's recorded output so the assertion shares sum to 0
        uint8_t corrupt = uint8_t(rng.below(3));
        z[corrupt] -= deficit;
        for (int i = 0; i < 3; ++i) views[i].mul_shares.push_back(z[i]);

        // assertion wire is z - c; party 0 carries the public value
        std::array<FieldElement, 3> outs{z[0] - claimed, z[1], z[2]};
        rep.output_shares.push_back(outs);
        for (int i = 0; i < 3; ++i) rep.commitments[i] = views[i].commitment();
    }

    std::vector<uint8_t> challenges =
        fiat_shamir(proof.circuit_id, st.publics, proof.repetitions);
    for (uint32_t j = 0; j < t; ++j) {
        ProofRepetition& rep = proof.repetitions[j];
        rep.opened = challenges[j];
        rep.views[0] = std::move(all_views[j][rep.opened]);
        rep.views[1] = std::move(all_views[j][(rep.opened + 1) % 3]);
    }
    return proof;
}

/// Empirical acceptance rate of the strategy over `trials` proofs at t reps.
inline double acceptance_rate(uint32_t t, int trials, uint64_t seed) {
    ffsuite::Rng rng(seed);
    cheat::Statement st = cheat::Statement::make(rng);
    int accepted = 0;
    for (int i = 0; i < trials; ++i) {
        ffsuite::Proof p = prove_with_one_corruption(st, t, rng);
        if (ffsuite::verify(st.circuit, st.publics, p)) ++accepted;
    }
    return double(accepted) / trials;
}

}  // namespace cheat
