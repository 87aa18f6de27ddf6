#pragma once

// Constraint sub-patterns emitted into a CircuitBuilder. Hints carry the
// non-deterministic values (bits, inverses, quotients); the constraints
// emitted here make every dishonest hint unsatisfiable.

#include <span>
#include <utility>
#include <vector>

#include "ffs/circuit.hpp"
#include "ffs/curve.hpp"

namespace ffsuite {

/// n boolean wires b_i, LSB first, with sum b_i 2^i = x. Unsatisfiable when
/// x >= 2^n. Requires n <= 254.
std::vector<uint32_t> gadget_bits(CircuitBuilder& b, uint32_t x, uint32_t n);

/// Euclidean division by a public constant m >= 1: constrains
/// sum = q*m + r, 0 <= r < m, q < 2^bits. Returns (q, r).
std::pair<uint32_t, uint32_t> gadget_divmod(CircuitBuilder& b, uint32_t sum, uint64_t m,
                                            uint32_t bits);

/// In-circuit replica of sponge_hash; equal inputs give the off-circuit
/// digest on the returned wire.
uint32_t gadget_sponge(CircuitBuilder& b, std::span<const uint32_t> inputs);

inline uint32_t gadget_sponge(CircuitBuilder& b, const std::vector<uint32_t>& inputs) {
    return gadget_sponge(b, std::span<const uint32_t>(inputs.data(), inputs.size()));
}

/// Affine point held as two wires.
struct WirePoint {
    uint32_t x;
    uint32_t y;
};

/// Incomplete affine addition (fails for P = +-Q or infinity) with an
/// inverse-hint guard on the denominator.
WirePoint gadget_ec_add(CircuitBuilder& b, const WirePoint& p, const WirePoint& q);
WirePoint gadget_ec_add_const(CircuitBuilder& b, const WirePoint& p, const CurvePoint& q);
WirePoint gadget_ec_double(CircuitBuilder& b, const WirePoint& p);

/// Double-and-add over an LSB-first bit decomposition. Starts from a fixed
/// offset point so the incomplete addition never sees the identity; the
/// accumulated 2^n * offset is subtracted at the end.
WirePoint gadget_ec_ladder(CircuitBuilder& b, std::span<const uint32_t> bits_lsb,
                           const WirePoint& base);
WirePoint gadget_ec_ladder_const(CircuitBuilder& b, std::span<const uint32_t> bits_lsb,
                                 const CurvePoint& base);

/// Complete in-circuit Schnorr verification:
/// recomputes R' = s*G + e*pk over 254-bit decompositions, then asserts
/// sponge(R'.x, R'.y, pk_x, pk_y, msg) = e. Also asserts (pk_x, pk_y) is on
/// the curve.
void gadget_schnorr_verify(CircuitBuilder& b, uint32_t pk_x, uint32_t pk_y, uint32_t e, uint32_t s,
                           uint32_t msg);

}  // namespace ffsuite
