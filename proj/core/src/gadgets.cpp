#include "ffs/gadgets.hpp"

#include "ffs/sponge.hpp"

namespace ffsuite {

namespace {

FieldElement pow2(uint32_t i) {
    FieldElement v = FieldElement::one();
    FieldElement two = FieldElement::from_u64(2);
    for (uint32_t k = 0; k < i; ++k) v *= two;
    return v;
}

uint32_t bit_length_u64(uint64_t v) {
    uint32_t n = 0;
    while (v) {
        ++n;
        v >>= 1;
    }
    return n;
}

// d*h = 1, so d is provably nonzero and h is its inverse.
uint32_t guarded_inverse(CircuitBuilder& b, uint32_t d) {
    uint32_t h = b.hint_inv(d);
    b.assert_zero(b.add_const(b.mul(d, h), -FieldElement::one()));
    return h;
}

}  // namespace

std::vector<uint32_t> gadget_bits(CircuitBuilder& b, uint32_t x, uint32_t n) {
    if (n > 254) throw Error(Errc::GadgetError, "bit decomposition width exceeds 254");
    std::vector<uint32_t> bits;
    bits.reserve(n);
    uint32_t acc = 0;
    bool have_acc = false;
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t bit = b.hint_bit(x, i);
        // b*(b-1) = 0
        b.assert_zero(b.sub(b.mul(bit, bit), bit));
        uint32_t term = b.mul_const(bit, pow2(i));
        acc = have_acc ? b.add(acc, term) : term;
        have_acc = true;
        bits.push_back(bit);
    }
    if (!have_acc) acc = b.constant(FieldElement());
    b.assert_zero(b.sub(acc, x));
    return bits;
}

std::pair<uint32_t, uint32_t> gadget_divmod(CircuitBuilder& b, uint32_t sum, uint64_t m,
                                            uint32_t bits) {
    if (m == 0) throw Error(Errc::GadgetError, "division by zero modulus");
    uint32_t rem_bits = bit_length_u64(m - 1);
    if (bits == 0 || bits + rem_bits + 1 > 252)
        throw Error(Errc::GadgetError, "divmod ranges do not fit the field");

    uint32_t q = b.hint_quot(sum, m);
    uint32_t r = b.hint_rem(sum, m);
    // sum = q*m + r over the integers, given the range checks below
    b.assert_zero(b.sub(b.add(b.mul_const(q, FieldElement::from_u64(m)), r), sum));
    gadget_bits(b, q, bits);
    gadget_bits(b, r, rem_bits);
    // r < m via m-1-r >= 0
    uint32_t slack = b.add_const(b.mul_const(r, -FieldElement::one()),
                                 FieldElement::from_u64(m - 1));
    gadget_bits(b, slack, rem_bits);
    return {q, r};
}

uint32_t gadget_sponge(CircuitBuilder& b, std::span<const uint32_t> inputs) {
    uint32_t state[kSpongeWidth] = {
        b.constant(FieldElement()),
        b.constant(FieldElement()),
        b.constant(FieldElement::from_u64(inputs.size())),
    };
    size_t i = 0;
    do {
        if (i < inputs.size()) state[0] = b.add(state[0], inputs[i]);
        if (i + 1 < inputs.size()) state[1] = b.add(state[1], inputs[i + 1]);
        for (int round = 0; round < kSpongeRounds; ++round) {
            for (int lane = 0; lane < kSpongeWidth; ++lane) {
                uint32_t t = b.add_const(state[lane], sponge_round_constant(round, lane));
                uint32_t t2 = b.mul(t, t);
                uint32_t t4 = b.mul(t2, t2);
                state[lane] = b.mul(t4, t);
            }
            uint32_t sum = b.add(b.add(state[0], state[1]), state[2]);
            for (int lane = 0; lane < kSpongeWidth; ++lane) state[lane] = b.add(state[lane], sum);
        }
        i += kSpongeRate;
    } while (i < inputs.size());
    return state[0];
}

WirePoint gadget_ec_add(CircuitBuilder& b, const WirePoint& p, const WirePoint& q) {
    uint32_t h = guarded_inverse(b, b.sub(q.x, p.x));
    uint32_t lambda = b.mul(b.sub(q.y, p.y), h);
    uint32_t x3 = b.sub(b.sub(b.mul(lambda, lambda), p.x), q.x);
    uint32_t y3 = b.sub(b.mul(lambda, b.sub(p.x, x3)), p.y);
    return {x3, y3};
}

WirePoint gadget_ec_add_const(CircuitBuilder& b, const WirePoint& p, const CurvePoint& q) {
    if (q.is_infinity()) throw Error(Errc::GadgetError, "cannot add the identity in-circuit");
    uint32_t h = guarded_inverse(b, b.add_const(b.mul_const(p.x, -FieldElement::one()), q.x()));
    uint32_t num = b.add_const(b.mul_const(p.y, -FieldElement::one()), q.y());
    uint32_t lambda = b.mul(num, h);
    uint32_t x3 = b.add_const(b.sub(b.mul(lambda, lambda), p.x), -q.x());
    uint32_t y3 = b.sub(b.mul(lambda, b.sub(p.x, x3)), p.y);
    return {x3, y3};
}

WirePoint gadget_ec_double(CircuitBuilder& b, const WirePoint& p) {
    uint32_t x2 = b.mul(p.x, p.x);
    uint32_t num = b.mul_const(x2, FieldElement::from_u64(3));
    uint32_t h = guarded_inverse(b, b.mul_const(p.y, FieldElement::from_u64(2)));
    uint32_t lambda = b.mul(num, h);
    uint32_t x3 = b.sub(b.mul(lambda, lambda), b.mul_const(p.x, FieldElement::from_u64(2)));
    uint32_t y3 = b.sub(b.mul(lambda, b.sub(p.x, x3)), p.y);
    return {x3, y3};
}

namespace {

uint32_t select(CircuitBuilder& b, uint32_t bit, uint32_t if_set, uint32_t if_clear) {
    return b.add(b.mul(bit, b.sub(if_set, if_clear)), if_clear);
}

template <typename AddStep>
WirePoint run_ladder(CircuitBuilder& b, std::span<const uint32_t> bits_lsb, AddStep add_step) {
    CurvePoint offset = derive_point(1);
    WirePoint acc{b.constant(offset.x()), b.constant(offset.y())};
    for (size_t i = bits_lsb.size(); i-- > 0;) {
        acc = gadget_ec_double(b, acc);
        WirePoint added = add_step(acc);
        acc = WirePoint{select(b, bits_lsb[i], added.x, acc.x),
                        select(b, bits_lsb[i], added.y, acc.y)};
    }
    // subtract the accumulated 2^n * offset
    U256 two_n;
    two_n.w[bits_lsb.size() / 64] = 1ull << (bits_lsb.size() % 64);
    CurvePoint correction = scalar_mul(Scalar::from_u256_mod(two_n), offset).negate();
    return gadget_ec_add_const(b, acc, correction);
}

}  // namespace

WirePoint gadget_ec_ladder(CircuitBuilder& b, std::span<const uint32_t> bits_lsb,
                           const WirePoint& base) {
    if (bits_lsb.empty() || bits_lsb.size() > 254)
        throw Error(Errc::GadgetError, "ladder width out of range");
    return run_ladder(b, bits_lsb,
                      [&](const WirePoint& acc) { return gadget_ec_add(b, acc, base); });
}

WirePoint gadget_ec_ladder_const(CircuitBuilder& b, std::span<const uint32_t> bits_lsb,
                                 const CurvePoint& base) {
    if (bits_lsb.empty() || bits_lsb.size() > 254)
        throw Error(Errc::GadgetError, "ladder width out of range");
    if (base.is_infinity()) throw Error(Errc::GadgetError, "ladder base is the identity");
    return run_ladder(b, bits_lsb,
                      [&](const WirePoint& acc) { return gadget_ec_add_const(b, acc, base); });
}

void gadget_schnorr_verify(CircuitBuilder& b, uint32_t pk_x, uint32_t pk_y, uint32_t e, uint32_t s,
                           uint32_t msg) {
    // public key must satisfy the curve equation
    uint32_t lhs = b.mul(pk_y, pk_y);
    uint32_t rhs = b.add_const(b.mul(b.mul(pk_x, pk_x), pk_x), curve_b());
    b.assert_zero(b.sub(lhs, rhs));

    std::vector<uint32_t> s_bits = gadget_bits(b, s, 254);
    std::vector<uint32_t> e_bits = gadget_bits(b, e, 254);

    WirePoint sg = gadget_ec_ladder_const(b, s_bits, derive_generator());
    WirePoint epk = gadget_ec_ladder(b, e_bits, WirePoint{pk_x, pk_y});
    WirePoint r = gadget_ec_add(b, sg, epk);

    const uint32_t transcript[5] = {r.x, r.y, pk_x, pk_y, msg};
    uint32_t digest = gadget_sponge(b, std::span<const uint32_t>(transcript, 5));
    b.assert_equal(digest, e);
}

}  // namespace ffsuite
