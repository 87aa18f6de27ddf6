#pragma once

// Statement compiler: a declarative config (data arrays, authority, library
// function, precision) becomes a provenance+statement circuit, a natively
// evaluated reference result, and a self-contained bundle directory.
//
// The compiled circuit asserts two things about the private data wires:
//   provenance — sponge(flattened data) equals the public digest h_w,
//   statement  — the chosen function's output equals the claimed public y
//                (the pair (y_q, y_r) for averages).
// The authority's Schnorr signature over h_w travels with the bundle; the
// ledger pre-check verifies it against the registered provider key.
//
// Flattening is normative because h_w depends on it: arrays in config order,
// each preceded by a count-of-field-elements prefix; numeric elements map
// one-to-one (doubles quantized, negatives as p - |n|); strings expand to a
// byte-length element followed by 31-byte big-endian chunks.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffs/circuit.hpp"
#include "ffs/curve.hpp"
#include "ffs/sign.hpp"

namespace ffsuite {

enum class DataKind { Int, Double, String };

struct DataArray {
    std::string name;
    DataKind kind = DataKind::Int;
    std::vector<uint32_t> shape;
    std::vector<int64_t> ints;            // quantized values for Int/Double
    std::vector<std::string> strings;     // String only

    size_t element_count() const;
};

struct Authority {
    CurvePoint pk;
    std::optional<Scalar> sk;                    // sign during compile
    std::optional<SchnorrSignature> signature;   // pre-made signature
};

struct FunctionSpec {
    std::string name;  // dot_product | weighted_sum | average_dot_products | compose
    std::map<std::string, std::string> args;  // role -> data array name
    std::vector<FunctionSpec> components;     // compose only

    /// Abstract shape of the function (names, not sizes): the ledger
    /// registry key.
    std::string canonical() const;
    Digest id() const;
};

struct CircuitConfig {
    uint32_t version = 1;
    std::vector<DataArray> data;
    Authority authority;
    FunctionSpec function;
    uint32_t precision = 2;

    static CircuitConfig from_json(const std::string& text, const std::string& base_dir);
    static CircuitConfig from_json_file(const std::string& path);

    const DataArray& find_array(const std::string& name, const std::string& context) const;
};

/// round-half-away-from-zero of value * 10^precision; negatives map to
/// p - |n| when encoded into the field.
int64_t quantize_to_int(double value, uint32_t precision);
FieldElement quantize(double value, uint32_t precision);

FieldElement int_to_field(__int128 v);

struct NativeResult {
    bool is_pair = false;  // average returns (q, r)
    __int128 y = 0;
    __int128 q = 0;
    uint64_t r = 0;

    /// Circuit public entries in layout order ("y" or "y_q","y_r").
    std::vector<std::pair<std::string, FieldElement>> result_publics() const;
    std::string to_string() const;
    static NativeResult from_string(const std::string& text);
};

/// Reference evaluation in plain integer arithmetic.
NativeResult native_eval(const FunctionSpec& f, const CircuitConfig& cfg);

struct FlattenedData {
    std::vector<FieldElement> all;        // full sequence hashed into h_w
    std::vector<FieldElement> private_values;  // data-derived subset, wire order
    std::vector<bool> is_private;         // per element of `all`
    // name -> offsets into `all` of the array's numeric elements
    std::map<std::string, std::vector<size_t>> numeric_offsets;
};

FlattenedData flatten_data(const CircuitConfig& cfg);

struct ArtifactBundle {
    Circuit circuit;
    PublicInputs publics;
    CurvePoint authority_pk;
    SchnorrSignature signature;
    std::vector<FieldElement> private_inputs;
    NativeResult native;
    FunctionSpec function;
    Digest function_id{};
    uint32_t precision = 2;

    FieldDigest h_w() const;

    /// Writes circuit.txt, publics.txt, witness.txt, signature.bin,
    /// manifest.txt into dir (created if absent).
    void emit(const std::string& dir) const;
    static ArtifactBundle load(const std::string& dir);
};

ArtifactBundle compile(const CircuitConfig& cfg);

}  // namespace ffsuite
