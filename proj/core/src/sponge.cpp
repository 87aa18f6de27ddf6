#include "ffs/sponge.hpp"

#include "ffs/sha256.hpp"

namespace ffsuite {

namespace {

struct RoundConstants {
    FieldElement c[kSpongeRounds][kSpongeWidth];

    RoundConstants() {
        for (int i = 0; i < kSpongeRounds; ++i) {
            for (int j = 0; j < kSpongeWidth; ++j) {
                Sha256 h;
                h.update("FFS-RC");
                h.update_u32_be(uint32_t(i));
                h.update_u32_be(uint32_t(j));
                Digest d = h.finalize();
                c[i][j] = FieldElement::from_bytes_mod(d);
            }
        }
    }
};

const RoundConstants& round_constants() {
    static const RoundConstants rc;
    return rc;
}

inline FieldElement pow5(const FieldElement& x) {
    FieldElement x2 = x.square();
    return x2.square() * x;
}

}  // namespace

const FieldElement& sponge_round_constant(int round, int lane) {
    return round_constants().c[round][lane];
}

void sponge_permute(FieldElement state[kSpongeWidth]) {
    const RoundConstants& rc = round_constants();
    for (int i = 0; i < kSpongeRounds; ++i) {
        for (int j = 0; j < kSpongeWidth; ++j) state[j] = pow5(state[j] + rc.c[i][j]);
        // multiply by [[2,1,1],[1,2,1],[1,1,2]]: lane + sum of all lanes
        FieldElement sum = state[0] + state[1] + state[2];
        state[0] += sum;
        state[1] += sum;
        state[2] += sum;
    }
}

FieldDigest sponge_hash(std::span<const FieldElement> inputs) {
    FieldElement state[kSpongeWidth] = {FieldElement(), FieldElement(),
                                        FieldElement::from_u64(inputs.size())};
    size_t i = 0;
    do {
        if (i < inputs.size()) state[0] += inputs[i];
        if (i + 1 < inputs.size()) state[1] += inputs[i + 1];
        sponge_permute(state);
        i += kSpongeRate;
    } while (i < inputs.size());
    return state[0];
}

}  // namespace ffsuite
