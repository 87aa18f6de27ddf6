#pragma once

// Algebraic sponge over the circuit field: width 3, rate 2, capacity 1,
// 57-round x^5 permutation. This is the provenance digest both off-circuit
// (here) and in-circuit (gadget_sponge); the two share round constants and
// schedule byte-for-byte. Placeholder construction, not a vetted hash.

#include <span>
#include <vector>

#include "ffs/field.hpp"

namespace ffsuite {

constexpr int kSpongeWidth = 3;
constexpr int kSpongeRate = 2;
constexpr int kSpongeRounds = 57;

/// Round constant c(round, lane) = sha256("FFS-RC" || round || lane) mod p.
const FieldElement& sponge_round_constant(int round, int lane);

/// One permutation call, in place.
void sponge_permute(FieldElement state[kSpongeWidth]);

/// Absorb the inputs two per permutation (initial state (0, 0, len)) and
/// squeeze lane 0.
FieldDigest sponge_hash(std::span<const FieldElement> inputs);

inline FieldDigest sponge_hash(const std::vector<FieldElement>& inputs) {
    return sponge_hash(std::span<const FieldElement>(inputs.data(), inputs.size()));
}

}  // namespace ffsuite
