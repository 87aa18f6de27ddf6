#include "ffs/compiler.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>

#include "ffs/gadgets.hpp"
#include "ffs/io.hpp"
#include "ffs/sponge.hpp"

namespace ffsuite {

namespace {

using nlohmann::json;

constexpr size_t kMaxElements = 1u << 22;
constexpr int kStringChunkBytes = 31;

bool valid_name(const std::string& s) {
    if (s.empty() || s.size() > 64) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_';
        if (!ok) return false;
    }
    return true;
}

std::string int128_to_string(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

__int128 int128_from_string(const std::string& s) {
    if (s.empty()) throw Error(Errc::ParseError, "empty integer");
    bool neg = s[0] == '-';
    __int128 v = 0;
    for (size_t i = neg ? 1 : 0; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw Error(Errc::ParseError, "bad integer " + s);
        v = v * 10 + (s[i] - '0');
        if (v < 0) throw Error(Errc::ParseError, "integer overflow in " + s);
    }
    return neg ? -v : v;
}

uint32_t bit_length_u128(unsigned __int128 v) {
    uint32_t n = 0;
    while (v) {
        ++n;
        v >>= 1;
    }
    return n;
}

// recursive shape/values walk, row-major
void collect_values(const json& node, const std::vector<uint32_t>& shape, size_t dim,
                    const std::string& path, DataKind kind, uint32_t precision,
                    std::vector<int64_t>& ints, std::vector<std::string>& strings) {
    if (dim == shape.size()) {
        switch (kind) {
        case DataKind::Int:
            if (!node.is_number_integer())
                throw Error(Errc::ConfigError, path + ": expected an integer");
            ints.push_back(node.get<int64_t>());
            break;
        case DataKind::Double:
            if (!node.is_number())
                throw Error(Errc::ConfigError, path + ": expected a number");
            ints.push_back(quantize_to_int(node.get<double>(), precision));
            break;
        case DataKind::String:
            if (!node.is_string()) throw Error(Errc::ConfigError, path + ": expected a string");
            strings.push_back(node.get<std::string>());
            break;
        }
        return;
    }
    if (!node.is_array() || node.size() != shape[dim])
        throw Error(Errc::ConfigError,
                    path + ": expected an array of length " + std::to_string(shape[dim]));
    for (size_t i = 0; i < node.size(); ++i)
        collect_values(node[i], shape, dim + 1, path + "[" + std::to_string(i) + "]", kind,
                       precision, ints, strings);
}

FunctionSpec parse_function(const json& f, const std::string& path, bool allow_compose) {
    FunctionSpec spec;
    if (!f.is_object() || !f.contains("name") || !f["name"].is_string())
        throw Error(Errc::ConfigError, path + ".name: missing function name");
    spec.name = f["name"].get<std::string>();

    if (spec.name == "compose") {
        if (!allow_compose)
            throw Error(Errc::ConfigError, path + ": compose may not be nested");
        if (!f.contains("components") || !f["components"].is_array() || f["components"].empty())
            throw Error(Errc::ConfigError, path + ".components: compose needs components");
        for (size_t i = 0; i < f["components"].size(); ++i) {
            FunctionSpec inner = parse_function(
                f["components"][i], path + ".components[" + std::to_string(i) + "]", false);
            if (inner.name != "dot_product" && inner.name != "weighted_sum")
                throw Error(Errc::ConfigError,
                            path + ": compose accepts scalar library functions only");
            spec.components.push_back(std::move(inner));
        }
        return spec;
    }

    if (spec.name != "dot_product" && spec.name != "weighted_sum" &&
        spec.name != "average_dot_products")
        throw Error(Errc::ConfigError, path + ": unknown function \"" + spec.name + "\"");
    if (!f.contains("args") || !f["args"].is_object())
        throw Error(Errc::ConfigError, path + ".args: missing argument bindings");
    for (const auto& [role, value] : f["args"].items()) {
        if (!value.is_string())
            throw Error(Errc::ConfigError, path + ".args." + role + ": expected a data name");
        spec.args[role] = value.get<std::string>();
    }

    auto require_roles = [&](std::initializer_list<const char*> roles) {
        if (spec.args.size() != roles.size())
            throw Error(Errc::ConfigError, path + ".args: wrong argument count");
        for (const char* r : roles) {
            if (!spec.args.count(r))
                throw Error(Errc::ConfigError, path + ".args: missing role \"" + std::string(r) +
                                                   "\"");
        }
    };
    if (spec.name == "dot_product") require_roles({"a", "b"});
    if (spec.name == "weighted_sum") require_roles({"weights", "values"});
    if (spec.name == "average_dot_products") require_roles({"matrix", "vector"});
    return spec;
}

void append_field_line(std::string& out, const std::string& label, const FieldElement& v) {
    out += label;
    out += ' ';
    out += v.to_hex();
    out += '\n';
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) throw Error(Errc::ParseError, "missing final newline");
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::pair<std::string, std::string> split_two(const std::string& line) {
    size_t sp = line.find(' ');
    if (sp == std::string::npos || sp + 1 >= line.size())
        throw Error(Errc::ParseError, "expected \"key value\" line: " + line);
    return {line.substr(0, sp), line.substr(sp + 1)};
}

uint64_t parse_dec_u64(const std::string& s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(Errc::ParseError, "bad integer \"" + s + "\"");
    return v;
}

}  // namespace

size_t DataArray::element_count() const {
    size_t n = 1;
    for (uint32_t d : shape) n *= d;
    return n;
}

std::string FunctionSpec::canonical() const {
    if (name != "compose") return name;
    std::string s = "compose(";
    for (size_t i = 0; i < components.size(); ++i) {
        if (i) s += ',';
        s += components[i].canonical();
    }
    s += ')';
    return s;
}

Digest FunctionSpec::id() const { return sha256(canonical()); }

int64_t quantize_to_int(double value, uint32_t precision) {
    if (precision > 18) throw Error(Errc::QuantizationError, "precision exceeds 18 digits");
    long double scale = 1.0L;
    for (uint32_t i = 0; i < precision; ++i) scale *= 10.0L;
    long double scaled = (long double)value * scale;
    if (!std::isfinite((double)scaled) || std::fabs((double)scaled) >= 9.2233720368547e18)
        throw Error(Errc::QuantizationError, "scaled value exceeds the 63-bit range");
    return (int64_t)llroundl(scaled);
}

FieldElement int_to_field(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    U256 raw(uint64_t(u), uint64_t(u >> 64), 0, 0);
    FieldElement f = FieldElement::from_u256(raw);
    return neg ? -f : f;
}

FieldElement quantize(double value, uint32_t precision) {
    return int_to_field(quantize_to_int(value, precision));
}

std::vector<std::pair<std::string, FieldElement>> NativeResult::result_publics() const {
    if (is_pair)
        return {{"y_q", int_to_field(q)}, {"y_r", int_to_field(__int128(r))}};
    return {{"y", int_to_field(y)}};
}

std::string NativeResult::to_string() const {
    if (is_pair) return int128_to_string(q) + " " + std::to_string(r);
    return int128_to_string(y);
}

NativeResult NativeResult::from_string(const std::string& text) {
    NativeResult out;
    size_t sp = text.find(' ');
    if (sp == std::string::npos) {
        out.is_pair = false;
        out.y = int128_from_string(text);
    } else {
        out.is_pair = true;
        out.q = int128_from_string(text.substr(0, sp));
        __int128 r = int128_from_string(text.substr(sp + 1));
        if (r < 0) throw Error(Errc::ParseError, "negative remainder");
        out.r = uint64_t(r);
    }
    return out;
}

CircuitConfig CircuitConfig::from_json_file(const std::string& path) {
    return from_json(read_text_file(path),
                     std::filesystem::path(path).parent_path().string());
}

CircuitConfig CircuitConfig::from_json(const std::string& text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error(Errc::ConfigError, "config root must be an object");

    CircuitConfig cfg;
    cfg.version = root.value("version", 1u);
    if (cfg.version != 1) throw Error(Errc::ConfigError, "version: unsupported config version");
    if (root.contains("precision")) {
        if (!root["precision"].is_number_unsigned() || root["precision"].get<uint64_t>() > 18)
            throw Error(Errc::ConfigError, "precision: expected an integer in [0, 18]");
        cfg.precision = root["precision"].get<uint32_t>();
    }

    if (!root.contains("data") || !root["data"].is_array() || root["data"].empty())
        throw Error(Errc::ConfigError, "data: expected a non-empty array");
    for (size_t i = 0; i < root["data"].size(); ++i) {
        const json& d = root["data"][i];
        std::string path = "data[" + std::to_string(i) + "]";
        DataArray arr;
        if (!d.contains("name") || !d["name"].is_string() ||
            !valid_name(d["name"].get<std::string>()))
            throw Error(Errc::ConfigError, path + ".name: expected [A-Za-z0-9_]+");
        arr.name = d["name"].get<std::string>();
        for (const DataArray& prev : cfg.data) {
            if (prev.name == arr.name)
                throw Error(Errc::ConfigError, path + ".name: duplicate \"" + arr.name + "\"");
        }
        std::string kind = d.value("kind", "int");
        if (kind == "int") {
            arr.kind = DataKind::Int;
        } else if (kind == "double") {
            arr.kind = DataKind::Double;
        } else if (kind == "string") {
            arr.kind = DataKind::String;
        } else {
            throw Error(Errc::ConfigError, path + ".kind: unknown kind \"" + kind + "\"");
        }
        if (!d.contains("shape") || !d["shape"].is_array() || d["shape"].empty())
            throw Error(Errc::ConfigError, path + ".shape: expected a non-empty array");
        size_t count = 1;
        for (const json& dim : d["shape"]) {
            if (!dim.is_number_unsigned() || dim.get<uint64_t>() == 0)
                throw Error(Errc::ConfigError, path + ".shape: dimensions must be positive");
            arr.shape.push_back(dim.get<uint32_t>());
            count *= arr.shape.back();
            if (count > kMaxElements)
                throw Error(Errc::ConfigError, path + ".shape: too many elements");
        }
        if (!d.contains("values"))
            throw Error(Errc::ConfigError, path + ".values: missing values");
        collect_values(d["values"], arr.shape, 0, path + ".values", arr.kind, cfg.precision,
                       arr.ints, arr.strings);
        cfg.data.push_back(std::move(arr));
    }

    if (!root.contains("authority") || !root["authority"].is_object())
        throw Error(Errc::ConfigError, "authority: expected an object");
    const json& auth = root["authority"];
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        if (fp.is_absolute() || base_dir.empty()) return p;
        return (std::filesystem::path(base_dir) / fp).string();
    };
    if (auth.contains("keyfile")) {
        Bytes sk_bytes = read_binary_file(resolve(auth["keyfile"].get<std::string>()));
        if (sk_bytes.size() != 32)
            throw Error(Errc::ConfigError, "authority.keyfile: secret key must be 32 bytes");
        KeyPair kp = KeyPair::from_secret(Scalar::from_bytes(sk_bytes));
        cfg.authority.sk = kp.sk;
        cfg.authority.pk = kp.pk;
    } else if (auth.contains("public_key") && auth.contains("signature")) {
        cfg.authority.pk =
            CurvePoint::deserialize(from_hex(auth["public_key"].get<std::string>()));
        Bytes sig = read_binary_file(resolve(auth["signature"].get<std::string>()));
        cfg.authority.signature = SchnorrSignature::deserialize(sig);
    } else {
        throw Error(Errc::ConfigError,
                    "authority: expected either keyfile or public_key+signature");
    }

    if (!root.contains("function"))
        throw Error(Errc::ConfigError, "function: missing function block");
    cfg.function = parse_function(root["function"], "function", true);

    // referenced data names must exist and be numeric
    auto check_args = [&](const FunctionSpec& f) {
        for (const auto& [role, name] : f.args) {
            const DataArray& arr = cfg.find_array(name, "function.args." + role);
            if (arr.kind == DataKind::String)
                throw Error(Errc::ConfigError,
                            "function.args." + role + ": string arrays cannot be computed on");
        }
    };
    if (cfg.function.name == "compose") {
        for (const FunctionSpec& comp : cfg.function.components) check_args(comp);
    } else {
        check_args(cfg.function);
    }
    return cfg;
}

const DataArray& CircuitConfig::find_array(const std::string& name,
                                           const std::string& context) const {
    for (const DataArray& arr : data) {
        if (arr.name == name) return arr;
    }
    throw Error(Errc::ConfigError, context + ": unknown data array \"" + name + "\"");
}

namespace {

__int128 checked_dot(const DataArray& a, const DataArray& b) {
    if (a.ints.size() != b.ints.size() || a.ints.empty())
        throw Error(Errc::ShapeMismatch, "dot product needs equal-length operands (" +
                                             std::to_string(a.ints.size()) + " vs " +
                                             std::to_string(b.ints.size()) + ")");
    __int128 acc = 0;
    for (size_t i = 0; i < a.ints.size(); ++i) {
        acc += (__int128)a.ints[i] * b.ints[i];
        __int128 bound = (__int128)1 << 120;
        if (acc > bound || acc < -bound)
            throw Error(Errc::QuantizationError, "native evaluation exceeds the integer range");
    }
    return acc;
}

}  // namespace

NativeResult native_eval(const FunctionSpec& f, const CircuitConfig& cfg) {
    NativeResult out;
    if (f.name == "dot_product" || f.name == "weighted_sum") {
        const char* ra = f.name == "dot_product" ? "a" : "weights";
        const char* rb = f.name == "dot_product" ? "b" : "values";
        out.y = checked_dot(cfg.find_array(f.args.at(ra), "function"),
                            cfg.find_array(f.args.at(rb), "function"));
        return out;
    }
    if (f.name == "compose") {
        for (const FunctionSpec& comp : f.components) out.y += native_eval(comp, cfg).y;
        return out;
    }
    if (f.name == "average_dot_products") {
        const DataArray& m = cfg.find_array(f.args.at("matrix"), "function");
        const DataArray& v = cfg.find_array(f.args.at("vector"), "function");
        if (m.shape.size() != 2)
            throw Error(Errc::ShapeMismatch, "matrix must be two-dimensional");
        size_t rows = m.shape[0], cols = m.shape[1];
        if (v.ints.size() != cols)
            throw Error(Errc::ShapeMismatch, "vector length " + std::to_string(v.ints.size()) +
                                                 " does not match matrix columns " +
                                                 std::to_string(cols));
        __int128 sum = 0;
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < cols; ++c) sum += (__int128)m.ints[r * cols + c] * v.ints[c];
        }
        out.is_pair = true;
        // Euclidean division with 0 <= r < rows
        __int128 rows128 = (__int128)rows;
        __int128 q = sum >= 0 ? sum / rows128 : -((-sum + rows128 - 1) / rows128);
        out.q = q;
        out.r = uint64_t(sum - q * rows128);
        return out;
    }
    throw Error(Errc::ConfigError, "unknown function \"" + f.name + "\"");
}

FlattenedData flatten_data(const CircuitConfig& cfg) {
    FlattenedData out;
    auto push = [&](const FieldElement& v, bool priv) {
        out.all.push_back(v);
        out.is_private.push_back(priv);
        if (priv) out.private_values.push_back(v);
    };
    for (const DataArray& arr : cfg.data) {
        if (arr.kind == DataKind::String) {
            size_t total = 0;
            for (const std::string& s : arr.strings)
                total += 1 + (s.size() + kStringChunkBytes - 1) / kStringChunkBytes;
            push(FieldElement::from_u64(total), false);
            for (const std::string& s : arr.strings) {
                push(FieldElement::from_u64(s.size()), true);
                for (size_t off = 0; off < s.size(); off += kStringChunkBytes) {
                    size_t len = std::min(size_t(kStringChunkBytes), s.size() - off);
                    std::array<uint8_t, 32> be{};
                    for (size_t i = 0; i < len; ++i) be[32 - len + i] = uint8_t(s[off + i]);
                    push(FieldElement::from_bytes(be), true);
                }
            }
        } else {
            push(FieldElement::from_u64(arr.ints.size()), false);
            std::vector<size_t>& offsets = out.numeric_offsets[arr.name];
            for (int64_t v : arr.ints) {
                offsets.push_back(out.all.size());
                push(int_to_field(v), true);
            }
        }
    }
    return out;
}

FieldDigest ArtifactBundle::h_w() const {
    const FieldElement* h = publics.find("h_w");
    if (!h) throw Error(Errc::ManifestMismatch, "bundle publics lack h_w");
    return *h;
}

ArtifactBundle compile(const CircuitConfig& cfg) {
    FlattenedData flat = flatten_data(cfg);
    FieldDigest h_w = sponge_hash(flat.all);

    ArtifactBundle bundle;
    bundle.function = cfg.function;
    bundle.function_id = cfg.function.id();
    bundle.precision = cfg.precision;
    bundle.authority_pk = cfg.authority.pk;
    bundle.private_inputs = flat.private_values;

    if (cfg.authority.sk) {
        bundle.signature = schnorr_sign(KeyPair{*cfg.authority.sk, cfg.authority.pk}, h_w);
    } else if (cfg.authority.signature) {
        bundle.signature = *cfg.authority.signature;
        if (!schnorr_verify(cfg.authority.pk, bundle.signature, h_w))
            throw Error(Errc::SignatureInvalid,
                        "provided signature does not cover the data digest");
    } else {
        throw Error(Errc::ConfigError, "authority carries neither a key nor a signature");
    }

    bundle.native = native_eval(cfg.function, cfg);

    // circuit: publics first, then data wires in flatten order
    CircuitBuilder b;
    uint32_t h_w_wire = b.add_public("h_w");
    std::vector<std::pair<std::string, uint32_t>> result_wires;
    for (const auto& [label, value] : bundle.native.result_publics()) {
        (void)value;
        result_wires.emplace_back(label, b.add_public(label));
    }

    std::vector<uint32_t> all_wires;
    all_wires.reserve(flat.all.size());
    for (size_t i = 0; i < flat.all.size(); ++i) {
        if (flat.is_private[i]) {
            all_wires.push_back(b.add_input());
        } else {
            all_wires.push_back(b.constant(flat.all[i]));
        }
    }

    // proof of provenance: in-circuit digest equals the public h_w
    uint32_t digest_wire = gadget_sponge(b, all_wires);
    b.assert_equal(digest_wire, h_w_wire);

    // proof of statement
    auto wires_of = [&](const std::string& name) {
        std::vector<uint32_t> ws;
        for (size_t off : flat.numeric_offsets.at(name)) ws.push_back(all_wires[off]);
        return ws;
    };
    auto emit_dot = [&](const FunctionSpec& f, const char* ra, const char* rb) {
        std::vector<uint32_t> a = wires_of(f.args.at(ra));
        std::vector<uint32_t> bw = wires_of(f.args.at(rb));
        uint32_t acc = 0;
        bool have = false;
        for (size_t i = 0; i < a.size(); ++i) {
            uint32_t term = b.mul(a[i], bw[i]);
            acc = have ? b.add(acc, term) : term;
            have = true;
        }
        return acc;
    };

    if (cfg.function.name == "average_dot_products") {
        const DataArray& m = cfg.find_array(cfg.function.args.at("matrix"), "function");
        std::vector<uint32_t> mw = wires_of(m.name);
        std::vector<uint32_t> vw = wires_of(cfg.function.args.at("vector"));
        size_t rows = m.shape[0], cols = m.shape[1];
        __int128 native_sum = bundle.native.q * (__int128)rows + bundle.native.r;
        if (native_sum < 0)
            throw Error(Errc::ConfigError,
                        "average requires a non-negative accumulated sum");
        uint32_t acc = 0;
        bool have = false;
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < cols; ++c) {
                uint32_t term = b.mul(mw[r * cols + c], vw[c]);
                acc = have ? b.add(acc, term) : term;
                have = true;
            }
        }
        uint32_t bits = bit_length_u128((unsigned __int128)native_sum) + 1;
        auto [q_wire, r_wire] = gadget_divmod(b, acc, rows, bits);
        b.assert_equal(q_wire, result_wires[0].second);
        b.assert_equal(r_wire, result_wires[1].second);
    } else if (cfg.function.name == "compose") {
        uint32_t total = 0;
        bool have = false;
        for (const FunctionSpec& comp : cfg.function.components) {
            const char* ra = comp.name == "dot_product" ? "a" : "weights";
            const char* rb = comp.name == "dot_product" ? "b" : "values";
            uint32_t part = emit_dot(comp, ra, rb);
            total = have ? b.add(total, part) : part;
            have = true;
        }
        b.assert_equal(total, result_wires[0].second);
    } else {
        const char* ra = cfg.function.name == "dot_product" ? "a" : "weights";
        const char* rb = cfg.function.name == "dot_product" ? "b" : "values";
        b.assert_equal(emit_dot(cfg.function, ra, rb), result_wires[0].second);
    }

    bundle.circuit = b.finalize();
    bundle.publics.set("h_w", h_w);
    for (const auto& [label, value] : bundle.native.result_publics())
        bundle.publics.set(label, value);
    return bundle;
}

namespace {

std::string render_publics(const ArtifactBundle& bundle) {
    std::string out = "ffs-publics v1\n";
    for (const auto& [label, value] : bundle.publics.entries)
        append_field_line(out, "public " + label, value);
    out += "authority ";
    out += to_hex(bundle.authority_pk.serialize());
    out += "\nend\n";
    return out;
}

std::string render_witness(const ArtifactBundle& bundle) {
    std::string out = "ffs-witness v1\ncount " + std::to_string(bundle.private_inputs.size()) +
                      "\n";
    for (const FieldElement& v : bundle.private_inputs) {
        out += v.to_hex();
        out += '\n';
    }
    out += "end\n";
    return out;
}

std::string render_manifest(const ArtifactBundle& bundle) {
    std::string out = "ffs-manifest v1\n";
    out += "circuit_id " + to_hex(bundle.circuit.id()) + "\n";
    out += "function_id " + to_hex(bundle.function_id) + "\n";
    out += "function " + bundle.function.canonical() + "\n";
    out += "precision " + std::to_string(bundle.precision) + "\n";
    out += "native " + bundle.native.to_string() + "\n";
    out += "inputs " + std::to_string(bundle.private_inputs.size()) + "\n";
    out += "end\n";
    return out;
}

}  // namespace

void ArtifactBundle::emit(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    auto at = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    write_file(at("circuit.txt"), circuit.serialize());
    write_file(at("publics.txt"), render_publics(*this));
    write_file(at("witness.txt"), render_witness(*this));
    auto sig = signature.serialize();
    write_file(at("signature.bin"), std::span<const uint8_t>(sig.data(), sig.size()));
    write_file(at("manifest.txt"), render_manifest(*this));
}

ArtifactBundle ArtifactBundle::load(const std::string& dir) {
    auto at = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };

    ArtifactBundle bundle;
    std::string circuit_text = read_text_file(at("circuit.txt"));
    bundle.circuit = Circuit::parse(circuit_text);
    if (bundle.circuit.serialize() != circuit_text)
        throw Error(Errc::ManifestMismatch, "circuit file is not in canonical form");

    // manifest
    std::string manifest_text = read_text_file(at("manifest.txt"));
    {
        std::vector<std::string> lines = split_lines(manifest_text);
        if (lines.size() != 8 || lines[0] != "ffs-manifest v1" || lines.back() != "end")
            throw Error(Errc::ParseError, "malformed manifest");
        auto field = [&](size_t i, const char* key) {
            auto [k, v] = split_two(lines[i]);
            if (k != key) throw Error(Errc::ParseError, std::string("expected ") + key);
            return v;
        };
        Digest claimed_circuit = [&] {
            Bytes raw = from_hex(field(1, "circuit_id"));
            if (raw.size() != 32) throw Error(Errc::ParseError, "bad circuit_id length");
            Digest d;
            std::copy(raw.begin(), raw.end(), d.begin());
            return d;
        }();
        if (claimed_circuit != bundle.circuit.id())
            throw Error(Errc::ManifestMismatch, "manifest circuit_id does not match the circuit");
        Bytes fid_raw = from_hex(field(2, "function_id"));
        if (fid_raw.size() != 32) throw Error(Errc::ParseError, "bad function_id length");
        std::copy(fid_raw.begin(), fid_raw.end(), bundle.function_id.begin());

        std::string fn_text = field(3, "function");
        bundle.function = FunctionSpec{};
        bundle.function.name = fn_text;  // canonical text; structure only matters for the id
        if (sha256(fn_text) != bundle.function_id)
            throw Error(Errc::ManifestMismatch, "manifest function_id does not match the function");

        bundle.precision = uint32_t(parse_dec_u64(field(4, "precision")));
        bundle.native = NativeResult::from_string(field(5, "native"));
        if (parse_dec_u64(field(6, "inputs")) != bundle.circuit.input_wires().size())
            throw Error(Errc::ManifestMismatch, "manifest input count mismatch");
    }

    // publics
    {
        std::vector<std::string> lines = split_lines(read_text_file(at("publics.txt")));
        if (lines.size() < 3 || lines[0] != "ffs-publics v1" || lines.back() != "end")
            throw Error(Errc::ParseError, "malformed publics file");
        for (size_t i = 1; i + 1 < lines.size(); ++i) {
            auto [key, rest] = split_two(lines[i]);
            if (key == "public") {
                auto [label, hex] = split_two(rest);
                bundle.publics.set(label, FieldElement::from_hex(hex));
            } else if (key == "authority") {
                Bytes pt = from_hex(rest);
                bundle.authority_pk = CurvePoint::deserialize(pt);
            } else {
                throw Error(Errc::ParseError, "unknown publics line: " + key);
            }
        }
        if (!publics_match_circuit(bundle.circuit, bundle.publics))
            throw Error(Errc::ManifestMismatch, "publics do not match the circuit layout");
    }

    // witness
    {
        std::vector<std::string> lines = split_lines(read_text_file(at("witness.txt")));
        if (lines.size() < 3 || lines[0] != "ffs-witness v1" || lines.back() != "end")
            throw Error(Errc::ParseError, "malformed witness file");
        auto [k, v] = split_two(lines[1]);
        if (k != "count") throw Error(Errc::ParseError, "expected count line");
        size_t n = parse_dec_u64(v);
        if (lines.size() != n + 3) throw Error(Errc::ParseError, "witness count mismatch");
        for (size_t i = 0; i < n; ++i)
            bundle.private_inputs.push_back(FieldElement::from_hex(lines[2 + i]));
        if (n != bundle.circuit.input_wires().size())
            throw Error(Errc::ManifestMismatch, "witness size does not match the circuit");
    }

    // signature
    {
        Bytes sig = read_binary_file(at("signature.bin"));
        bundle.signature = SchnorrSignature::deserialize(sig);
        if (!schnorr_verify(bundle.authority_pk, bundle.signature, bundle.h_w()))
            throw Error(Errc::SignatureInvalid, "bundle signature does not verify");
    }
    return bundle;
}

}  // namespace ffsuite
