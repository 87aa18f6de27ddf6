#pragma once

// Gate-level arithmetic circuits over the circuit field.
//
// Wire model: wire 0 is the constant-one wire; every other wire is defined
// exactly once, by a private input, a public input, a hint, or a gate output,
// and may only reference lower-numbered wires. Hints are prover-supplied
// values (bit decompositions, inverses, Euclidean quotient/remainder) that
// gates cannot compute forward; constraints emitted alongside them make any
// dishonest hint unsatisfiable.
//
// The canonical text serialization is normative: circuit_id is the SHA-256
// of those exact bytes and feeds proof transcripts and the verifier registry.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffs/field.hpp"
#include "ffs/sha256.hpp"

namespace ffsuite {

enum class GateKind : uint8_t { Add, Mul, AddConst, MulConst, AssertZero };

struct Gate {
    GateKind kind;
    uint32_t a;  // first operand wire
    uint32_t b;  // second operand wire, or constant-table index for *Const
    uint32_t c;  // output wire; unused for AssertZero
};

enum class HintKind : uint8_t { Bit, Inv, Quot, Rem };

struct Hint {
    HintKind kind;
    uint32_t wire;  // defined wire
    uint32_t src;   // source wire
    uint64_t arg;   // bit index for Bit, divisor for Quot/Rem
};

enum class WireDef : uint8_t { One, Input, Public, Hint, Gate };

struct PublicInputs {
    std::vector<std::pair<std::string, FieldElement>> entries;

    Bytes canonical_bytes() const;
    Digest hash() const;
    const FieldElement* find(const std::string& label) const;
    void set(const std::string& label, const FieldElement& v);
};

struct Witness {
    std::vector<FieldElement> values;
};

class Circuit {
public:
    uint32_t wire_count() const { return wire_count_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<FieldElement>& constants() const { return constants_; }
    const std::vector<uint32_t>& input_wires() const { return inputs_; }
    const std::vector<std::pair<std::string, uint32_t>>& public_wires() const { return publics_; }
    const std::vector<Hint>& hints() const { return hints_; }
    const Digest& id() const { return id_; }

    /// Private input and hint wires in wire order; these are the values a
    /// prover injects as secret shares.
    const std::vector<uint32_t>& injected_wires() const { return injected_; }
    /// Wires constrained to zero, in gate order.
    const std::vector<uint32_t>& assert_wires() const { return asserts_; }
    size_t mul_gate_count() const { return mul_count_; }

    WireDef def_kind(uint32_t wire) const { return def_kind_[wire]; }
    uint32_t def_index(uint32_t wire) const { return def_index_[wire]; }

    /// Streams the canonical serialization into a sink.
    void write_canonical(const std::function<void(std::string_view)>& sink) const;
    std::string serialize() const;

    static Circuit parse(std::string_view text);

    friend class CircuitBuilder;

private:
    void build_derived_tables();
    Digest compute_id() const;

    uint32_t wire_count_ = 1;
    std::vector<Gate> gates_;
    std::vector<FieldElement> constants_;
    std::vector<uint32_t> inputs_;
    std::vector<std::pair<std::string, uint32_t>> publics_;
    std::vector<Hint> hints_;
    Digest id_{};

    std::vector<WireDef> def_kind_;
    std::vector<uint32_t> def_index_;
    std::vector<uint32_t> injected_;
    std::vector<uint32_t> asserts_;
    size_t mul_count_ = 0;
};

class CircuitBuilder {
public:
    CircuitBuilder();

    /// Constant-one wire.
    uint32_t one() const { return 0; }

    uint32_t add_input();
    uint32_t add_public(const std::string& label);

    uint32_t add(uint32_t a, uint32_t b);
    uint32_t mul(uint32_t a, uint32_t b);
    uint32_t add_const(uint32_t a, const FieldElement& k);
    uint32_t mul_const(uint32_t a, const FieldElement& k);
    void assert_zero(uint32_t a);

    uint32_t sub(uint32_t a, uint32_t b) { return add(a, mul_const(b, -FieldElement::one())); }
    uint32_t constant(const FieldElement& k) { return mul_const(one(), k); }
    void assert_equal(uint32_t a, uint32_t b) { assert_zero(sub(a, b)); }

    uint32_t hint_bit(uint32_t src, uint32_t bit_index);
    uint32_t hint_inv(uint32_t src);
    uint32_t hint_quot(uint32_t src, uint64_t m);
    uint32_t hint_rem(uint32_t src, uint64_t m);

    size_t mul_gate_count() const { return mul_count_; }
    uint32_t wire_count() const { return next_wire_; }

    /// Seals the circuit and computes circuit_id; the builder is spent.
    Circuit finalize();

private:
    uint32_t check(uint32_t wire) const;
    uint32_t alloc();
    uint32_t const_index(const FieldElement& k);

    uint32_t next_wire_ = 1;
    size_t mul_count_ = 0;
    bool finalized_ = false;
    Circuit c_;
};

/// Forward-evaluates every wire, then checks each AssertZero gate; throws
/// UnsatisfiedConstraint naming the first failing gate.
Witness eval_witness(const Circuit& c, std::span<const FieldElement> private_inputs,
                     const PublicInputs& publics);

/// Layout check shared by eval and the proof system: publics must match the
/// circuit's labels exactly, in order.
bool publics_match_circuit(const Circuit& c, const PublicInputs& publics);

}  // namespace ffsuite
