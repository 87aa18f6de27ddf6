#include <doctest.h>

#include <vector>

#include "ffs/rng.hpp"
#include "ffs/sha256.hpp"
#include "ffs/sponge.hpp"
#include "oracle.hpp"

using namespace ffsuite;

TEST_CASE("empty input equals squeezing the permutation of (0,0,0)") {
    FieldElement state[3] = {FieldElement(), FieldElement(), FieldElement()};
    sponge_permute(state);
    CHECK(sponge_hash(std::vector<FieldElement>{}) == state[0]);
}

TEST_CASE("round constants follow the domain-separated derivation") {
    Sha256 h;
    h.update("FFS-RC");
    h.update_u32_be(0);
    h.update_u32_be(0);
    CHECK(sponge_round_constant(0, 0) == FieldElement::from_bytes_mod(h.finalize()));

    Sha256 h2;
    h2.update("FFS-RC");
    h2.update_u32_be(56);
    h2.update_u32_be(2);
    CHECK(sponge_round_constant(56, 2) == FieldElement::from_bytes_mod(h2.finalize()));
}

TEST_CASE("deterministic and order-sensitive") {
    std::vector<FieldElement> a{FieldElement::from_u64(1), FieldElement::from_u64(2)};
    std::vector<FieldElement> b{FieldElement::from_u64(2), FieldElement::from_u64(1)};
    CHECK(sponge_hash(a) == sponge_hash(a));
    CHECK(sponge_hash(a) != sponge_hash(b));
}

TEST_CASE("length is bound into the capacity lane") {
    // [x] vs [x, 0]: same absorbed rate values, different length tag
    std::vector<FieldElement> one{FieldElement::from_u64(9)};
    std::vector<FieldElement> padded{FieldElement::from_u64(9), FieldElement()};
    CHECK(sponge_hash(one) != sponge_hash(padded));
}

TEST_CASE("output is always canonical") {
    Rng rng(0x50);
    for (int i = 0; i < 100; ++i) {
        std::vector<FieldElement> in;
        for (uint64_t j = rng.below(9); j > 0; --j) in.push_back(rng.field_element());
        FieldElement out = sponge_hash(in);
        CHECK(out.canonical() < FieldElement::modulus);
    }
}

TEST_CASE("single-element change flips the digest") {
    Rng rng(0x51);
    for (int i = 0; i < 50; ++i) {
        std::vector<FieldElement> in;
        for (int j = 0; j < 7; ++j) in.push_back(rng.field_element());
        FieldDigest base = sponge_hash(in);
        size_t pos = rng.below(in.size());
        in[pos] += FieldElement::one();
        CHECK(sponge_hash(in) != base);
    }
}
