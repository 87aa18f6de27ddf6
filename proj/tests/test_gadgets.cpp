#include <doctest.h>

#include "ffs/gadgets.hpp"
#include "ffs/rng.hpp"
#include "ffs/sign.hpp"
#include "ffs/sponge.hpp"
#include "oracle.hpp"

using namespace ffsuite;

namespace {

std::vector<FieldElement> fe(std::initializer_list<uint64_t> vals) {
    std::vector<FieldElement> out;
    for (uint64_t v : vals) out.push_back(FieldElement::from_u64(v));
    return out;
}

}  // namespace

TEST_CASE("gadget_bits decomposes LSB-first") {
    CircuitBuilder b;
    uint32_t x = b.add_input();
    std::vector<uint32_t> bits = gadget_bits(b, x, 4);
    Circuit c = b.finalize();

    Witness w = eval_witness(c, fe({5}), PublicInputs{});
    std::vector<uint64_t> got;
    for (uint32_t bw : bits) got.push_back(w.values[bw].canonical().w[0]);
    CHECK(got == std::vector<uint64_t>{1, 0, 1, 0});
}

TEST_CASE("gadget_bits is exhaustively correct below 2^4 and unsatisfiable above") {
    for (uint64_t x = 0; x < 24; ++x) {
        CircuitBuilder b;
        uint32_t in = b.add_input();
        gadget_bits(b, in, 4);
        Circuit c = b.finalize();
        if (x < 16) {
            CHECK_NOTHROW(eval_witness(c, fe({x}), PublicInputs{}));
        } else {
            CHECK_THROWS_AS(eval_witness(c, fe({x}), PublicInputs{}), Error);
        }
    }
}

TEST_CASE("gadget_bits round-trips random 16-bit values against the integer oracle") {
    Rng rng(0xb17);
    CircuitBuilder b;
    uint32_t in = b.add_input();
    std::vector<uint32_t> bits = gadget_bits(b, in, 16);
    Circuit c = b.finalize();
    for (int i = 0; i < 100; ++i) {
        uint64_t x = rng.below(1u << 16);
        Witness w = eval_witness(c, fe({x}), PublicInputs{});
        for (int k = 0; k < 16; ++k) {
            CHECK(w.values[bits[k]].canonical().w[0] == ((x >> k) & 1));
        }
    }
}

TEST_CASE("gadget_bits rejects widths beyond 254") {
    CircuitBuilder b;
    uint32_t in = b.add_input();
    CHECK_THROWS_AS(gadget_bits(b, in, 255), Error);
}

TEST_CASE("gadget_divmod known answers") {
    auto run = [](uint64_t sum, uint64_t m) {
        CircuitBuilder b;
        uint32_t in = b.add_input();
        auto [q, r] = gadget_divmod(b, in, m, 32);
        Circuit c = b.finalize();
        Witness w = eval_witness(c, fe({sum}), PublicInputs{});
        return std::pair<uint64_t, uint64_t>{w.values[q].canonical().w[0],
                                             w.values[r].canonical().w[0]};
    };
    CHECK(run(10, 2) == std::pair<uint64_t, uint64_t>{5, 0});
    CHECK(run(7, 3) == std::pair<uint64_t, uint64_t>{2, 1});
    CHECK(run(0, 5) == std::pair<uint64_t, uint64_t>{0, 0});
}

TEST_CASE("gadget_divmod exhaustive small domain and random against native divmod") {
    for (uint64_t m = 1; m <= 5; ++m) {
        for (uint64_t sum = 0; sum <= 20; ++sum) {
            CircuitBuilder b;
            uint32_t in = b.add_input();
            auto [q, r] = gadget_divmod(b, in, m, 8);
            Circuit c = b.finalize();
            Witness w = eval_witness(c, fe({sum}), PublicInputs{});
            CHECK(w.values[q].canonical().w[0] == sum / m);
            CHECK(w.values[r].canonical().w[0] == sum % m);
        }
    }
    Rng rng(0xd1f);
    for (int i = 0; i < 100; ++i) {
        uint64_t sum = rng.below(1ull << 40);
        uint64_t m = 1 + rng.below(1000);
        CircuitBuilder b;
        uint32_t in = b.add_input();
        auto [q, r] = gadget_divmod(b, in, m, 48);
        Circuit c = b.finalize();
        Witness w = eval_witness(c, fe({sum}), PublicInputs{});
        CHECK(w.values[q].canonical().w[0] == sum / m);
        CHECK(w.values[r].canonical().w[0] == sum % m);
    }
}

TEST_CASE("gadget_divmod rejects zero modulus") {
    CircuitBuilder b;
    uint32_t in = b.add_input();
    CHECK_THROWS_AS(gadget_divmod(b, in, 0, 8), Error);
}

TEST_CASE("gadget_sponge equals the off-circuit sponge") {
    Rng rng(0x595);
    for (int iter = 0; iter < 100; ++iter) {
        size_t n = rng.below(7);
        std::vector<FieldElement> inputs;
        for (size_t i = 0; i < n; ++i) inputs.push_back(rng.field_element());

        CircuitBuilder b;
        std::vector<uint32_t> in_wires;
        for (size_t i = 0; i < n; ++i) in_wires.push_back(b.add_input());
        uint32_t out = gadget_sponge(b, in_wires);
        Circuit c = b.finalize();

        Witness w = eval_witness(c, inputs, PublicInputs{});
        CHECK(w.values[out] == sponge_hash(inputs));
    }
}

TEST_CASE("gadget_sponge empty input matches the off-circuit empty digest") {
    CircuitBuilder b;
    uint32_t out = gadget_sponge(b, std::vector<uint32_t>{});
    Circuit c = b.finalize();
    Witness w = eval_witness(c, std::vector<FieldElement>{}, PublicInputs{});
    CHECK(w.values[out] == sponge_hash(std::vector<FieldElement>{}));
}

TEST_CASE("gadget_sponge costs 513 multiplication gates per permutation") {
    CircuitBuilder b2;
    std::vector<uint32_t> two{b2.add_input(), b2.add_input()};
    gadget_sponge(b2, two);
    CHECK(b2.mul_gate_count() == 513);

    CircuitBuilder b3;
    std::vector<uint32_t> three{b3.add_input(), b3.add_input(), b3.add_input()};
    gadget_sponge(b3, three);
    CHECK(b3.mul_gate_count() == 2 * 513);
}

TEST_CASE("in-circuit EC addition and doubling match the native group law") {
    Rng rng(0xecc);
    for (int i = 0; i < 10; ++i) {
        CurvePoint p = scalar_mul(rng.nonzero_scalar(), derive_generator());
        CurvePoint q = scalar_mul(rng.nonzero_scalar(), derive_generator());
        if (p.x() == q.x()) continue;

        CircuitBuilder b;
        WirePoint pw{b.add_input(), b.add_input()};
        WirePoint qw{b.add_input(), b.add_input()};
        WirePoint sum = gadget_ec_add(b, pw, qw);
        WirePoint dbl = gadget_ec_double(b, pw);
        WirePoint sum_const = gadget_ec_add_const(b, pw, q);
        Circuit c = b.finalize();

        std::vector<FieldElement> in{p.x(), p.y(), q.x(), q.y()};
        Witness w = eval_witness(c, in, PublicInputs{});

        CurvePoint expect_sum = point_add(p, q);
        CurvePoint expect_dbl = point_add(p, p);
        CHECK(w.values[sum.x] == expect_sum.x());
        CHECK(w.values[sum.y] == expect_sum.y());
        CHECK(w.values[dbl.x] == expect_dbl.x());
        CHECK(w.values[dbl.y] == expect_dbl.y());
        CHECK(w.values[sum_const.x] == expect_sum.x());
        CHECK(w.values[sum_const.y] == expect_sum.y());
    }
}

TEST_CASE("in-circuit ladder reproduces native scalar multiplication") {
    Rng rng(0x1ad);
    for (int i = 0; i < 5; ++i) {
        uint64_t k = 1 + rng.below(~0ull - 1);
        Scalar ks = Scalar::from_u64(k);

        CircuitBuilder b;
        uint32_t k_wire = b.add_input();
        std::vector<uint32_t> bits = gadget_bits(b, k_wire, 64);
        WirePoint res = gadget_ec_ladder_const(b, bits, derive_generator());
        Circuit c = b.finalize();

        Witness w = eval_witness(c, fe({k}), PublicInputs{});
        CurvePoint expect = scalar_mul(ks, derive_generator());
        CHECK(w.values[res.x] == expect.x());
        CHECK(w.values[res.y] == expect.y());
    }
}

TEST_CASE("gadget_schnorr_verify accepts honest signatures and rejects perturbations") {
    Rng rng(0x5c4);
    KeyPair kp = KeyPair::generate(rng);
    FieldDigest msg = rng.field_element();
    SchnorrSignature sig = schnorr_sign(kp, msg);
    REQUIRE(schnorr_verify(kp.pk, sig, msg));

    CircuitBuilder b;
    uint32_t pk_x = b.add_public("pk_x");
    uint32_t pk_y = b.add_public("pk_y");
    uint32_t e = b.add_input();
    uint32_t s = b.add_input();
    uint32_t m = b.add_input();
    gadget_schnorr_verify(b, pk_x, pk_y, e, s, m);
    Circuit c = b.finalize();
    size_t mul_gates = c.mul_gate_count();

    PublicInputs pub;
    pub.set("pk_x", kp.pk.x());
    pub.set("pk_y", kp.pk.y());
    FieldElement s_as_field = FieldElement::from_u256(sig.s.canonical());
    std::vector<FieldElement> in{sig.e, s_as_field, msg};
    CHECK_NOTHROW(eval_witness(c, in, pub));

    SUBCASE("perturbed s fails") {
        std::vector<FieldElement> bad{sig.e, s_as_field + FieldElement::one(), msg};
        CHECK_THROWS_AS(eval_witness(c, bad, pub), Error);
    }
    SUBCASE("perturbed message fails") {
        std::vector<FieldElement> bad{sig.e, s_as_field, msg + FieldElement::one()};
        CHECK_THROWS_AS(eval_witness(c, bad, pub), Error);
    }
    SUBCASE("wrong public key fails") {
        KeyPair other = KeyPair::generate(rng);
        PublicInputs bad;
        bad.set("pk_x", other.pk.x());
        bad.set("pk_y", other.pk.y());
        CHECK_THROWS_AS(eval_witness(c, in, bad), Error);
    }
    SUBCASE("gate count is stable across builds") {
        CircuitBuilder b2;
        uint32_t px = b2.add_public("pk_x");
        uint32_t py = b2.add_public("pk_y");
        uint32_t e2 = b2.add_input();
        uint32_t s2 = b2.add_input();
        uint32_t m2 = b2.add_input();
        gadget_schnorr_verify(b2, px, py, e2, s2, m2);
        Circuit c2 = b2.finalize();
        CHECK(c2.mul_gate_count() == mul_gates);
        CHECK(c2.id() == c.id());
        MESSAGE("schnorr verification gadget multiplication gates: ", mul_gates);
        CHECK(mul_gates > 5000);
        CHECK(mul_gates < 20000);
    }
}
