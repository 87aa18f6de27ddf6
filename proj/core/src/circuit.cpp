#include "ffs/circuit.hpp"

#include <charconv>
#include <map>

namespace ffsuite {

namespace {

const char* kHeader = "ffs-circuit v1";

std::string field_modulus_hex() { return u256_to_hex(FieldElement::modulus); }

void append_dec(std::string& out, uint64_t v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, end);
}

struct LineReader {
    std::string_view text;
    size_t pos = 0;
    size_t line_no = 0;

    std::string_view next_line() {
        if (pos >= text.size()) throw Error(Errc::ParseError, "unexpected end of circuit text");
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) throw Error(Errc::ParseError, "missing final newline");
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        return line;
    }

    bool at_end() const { return pos >= text.size(); }
};

struct Tokens {
    std::vector<std::string_view> parts;

    explicit Tokens(std::string_view line) {
        size_t i = 0;
        while (i < line.size()) {
            size_t j = line.find(' ', i);
            if (j == std::string_view::npos) j = line.size();
            if (j == i) throw Error(Errc::ParseError, "malformed spacing in circuit line");
            parts.push_back(line.substr(i, j - i));
            i = j + 1;
        }
        if (!line.empty() && line.back() == ' ')
            throw Error(Errc::ParseError, "trailing space in circuit line");
    }

    std::string_view at(size_t i) const {
        if (i >= parts.size()) throw Error(Errc::ParseError, "truncated circuit line");
        return parts[i];
    }

    void expect_size(size_t n) const {
        if (parts.size() != n) throw Error(Errc::ParseError, "wrong token count in circuit line");
    }
};

uint64_t parse_u64(std::string_view s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(Errc::ParseError, "bad integer \"" + std::string(s) + "\"");
    // reject non-canonical leading zeros
    if (s.size() > 1 && s[0] == '0') throw Error(Errc::ParseError, "non-canonical integer");
    return v;
}

uint32_t parse_wire(std::string_view s, uint32_t wire_count) {
    uint64_t v = parse_u64(s);
    if (v >= wire_count) throw Error(Errc::ParseError, "wire index out of range");
    return uint32_t(v);
}

bool valid_label(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

Bytes PublicInputs::canonical_bytes() const {
    Bytes out;
    for (const auto& [label, value] : entries) {
        append_u32_be(out, uint32_t(label.size()));
        append(out, label);
        auto vb = value.to_bytes();
        append(out, vb);
    }
    return out;
}

Digest PublicInputs::hash() const {
    auto b = canonical_bytes();
    return sha256(std::span<const uint8_t>(b.data(), b.size()));
}

const FieldElement* PublicInputs::find(const std::string& label) const {
    for (const auto& [l, v] : entries) {
        if (l == label) return &v;
    }
    return nullptr;
}

void PublicInputs::set(const std::string& label, const FieldElement& v) {
    for (auto& [l, old] : entries) {
        if (l == label) {
            old = v;
            return;
        }
    }
    entries.emplace_back(label, v);
}

CircuitBuilder::CircuitBuilder() = default;

uint32_t CircuitBuilder::check(uint32_t wire) const {
    if (wire >= next_wire_)
        throw Error(Errc::BuilderError, "wire " + std::to_string(wire) + " not allocated");
    return wire;
}

uint32_t CircuitBuilder::alloc() { return next_wire_++; }

uint32_t CircuitBuilder::const_index(const FieldElement& k) {
    for (uint32_t i = 0; i < c_.constants_.size(); ++i) {
        if (c_.constants_[i] == k) return i;
    }
    c_.constants_.push_back(k);
    return uint32_t(c_.constants_.size() - 1);
}

uint32_t CircuitBuilder::add_input() {
    uint32_t w = alloc();
    c_.inputs_.push_back(w);
    return w;
}

uint32_t CircuitBuilder::add_public(const std::string& label) {
    if (!valid_label(label)) throw Error(Errc::BuilderError, "bad public label \"" + label + "\"");
    for (const auto& [l, w] : c_.publics_) {
        if (l == label) throw Error(Errc::BuilderError, "duplicate public label \"" + label + "\"");
    }
    uint32_t w = alloc();
    c_.publics_.emplace_back(label, w);
    return w;
}

uint32_t CircuitBuilder::add(uint32_t a, uint32_t b) {
    check(a);
    check(b);
    uint32_t out = alloc();
    c_.gates_.push_back({GateKind::Add, a, b, out});
    return out;
}

uint32_t CircuitBuilder::mul(uint32_t a, uint32_t b) {
    check(a);
    check(b);
    uint32_t out = alloc();
    c_.gates_.push_back({GateKind::Mul, a, b, out});
    ++mul_count_;
    return out;
}

uint32_t CircuitBuilder::add_const(uint32_t a, const FieldElement& k) {
    check(a);
    uint32_t out = alloc();
    c_.gates_.push_back({GateKind::AddConst, a, const_index(k), out});
    return out;
}

uint32_t CircuitBuilder::mul_const(uint32_t a, const FieldElement& k) {
    check(a);
    uint32_t out = alloc();
    c_.gates_.push_back({GateKind::MulConst, a, const_index(k), out});
    return out;
}

void CircuitBuilder::assert_zero(uint32_t a) {
    check(a);
    c_.gates_.push_back({GateKind::AssertZero, a, 0, 0});
}

uint32_t CircuitBuilder::hint_bit(uint32_t src, uint32_t bit_index) {
    check(src);
    if (bit_index >= 256) throw Error(Errc::BuilderError, "bit index out of range");
    uint32_t w = alloc();
    c_.hints_.push_back({HintKind::Bit, w, src, bit_index});
    return w;
}

uint32_t CircuitBuilder::hint_inv(uint32_t src) {
    check(src);
    uint32_t w = alloc();
    c_.hints_.push_back({HintKind::Inv, w, src, 0});
    return w;
}

uint32_t CircuitBuilder::hint_quot(uint32_t src, uint64_t m) {
    check(src);
    if (m == 0) throw Error(Errc::BuilderError, "division hint by zero");
    uint32_t w = alloc();
    c_.hints_.push_back({HintKind::Quot, w, src, m});
    return w;
}

uint32_t CircuitBuilder::hint_rem(uint32_t src, uint64_t m) {
    check(src);
    if (m == 0) throw Error(Errc::BuilderError, "division hint by zero");
    uint32_t w = alloc();
    c_.hints_.push_back({HintKind::Rem, w, src, 0});
    c_.hints_.back().arg = m;
    return w;
}

Circuit CircuitBuilder::finalize() {
    if (finalized_) throw Error(Errc::BuilderError, "builder already finalized");
    finalized_ = true;
    c_.wire_count_ = next_wire_;
    c_.mul_count_ = mul_count_;
    c_.build_derived_tables();
    c_.id_ = c_.compute_id();
    return std::move(c_);
}

void Circuit::build_derived_tables() {
    def_kind_.assign(wire_count_, WireDef::One);
    def_index_.assign(wire_count_, 0);
    std::vector<bool> defined(wire_count_, false);
    defined[0] = true;

    auto define = [&](uint32_t w, WireDef k, uint32_t idx) {
        if (w == 0 || defined[w])
            throw Error(Errc::BuilderError, "wire " + std::to_string(w) + " multiply defined");
        defined[w] = true;
        def_kind_[w] = k;
        def_index_[w] = idx;
    };

    for (uint32_t i = 0; i < inputs_.size(); ++i) define(inputs_[i], WireDef::Input, i);
    for (uint32_t i = 0; i < publics_.size(); ++i) define(publics_[i].second, WireDef::Public, i);
    for (uint32_t i = 0; i < hints_.size(); ++i) {
        const Hint& h = hints_[i];
        if (h.src >= h.wire) throw Error(Errc::BuilderError, "hint reads a later wire");
        define(h.wire, WireDef::Hint, i);
    }
    mul_count_ = 0;
    asserts_.clear();
    uint32_t last_output = 0;
    for (uint32_t i = 0; i < gates_.size(); ++i) {
        const Gate& g = gates_[i];
        if (g.kind == GateKind::AssertZero) {
            if (!defined[g.a]) throw Error(Errc::BuilderError, "assert reads an undefined wire");
            asserts_.push_back(g.a);
            continue;
        }
        if (g.c <= last_output && last_output != 0)
            throw Error(Errc::BuilderError, "gate outputs out of emission order");
        last_output = g.c;
        if (g.a >= g.c || (g.kind == GateKind::Add && g.b >= g.c) ||
            (g.kind == GateKind::Mul && g.b >= g.c))
            throw Error(Errc::BuilderError, "gate reads a later wire");
        if ((g.kind == GateKind::AddConst || g.kind == GateKind::MulConst) &&
            g.b >= constants_.size())
            throw Error(Errc::BuilderError, "constant index out of range");
        define(g.c, WireDef::Gate, i);
        if (g.kind == GateKind::Mul) ++mul_count_;
    }
    for (uint32_t w = 0; w < wire_count_; ++w) {
        if (!defined[w]) throw Error(Errc::BuilderError, "wire " + std::to_string(w) + " undefined");
    }

    injected_.clear();
    for (uint32_t w = 1; w < wire_count_; ++w) {
        if (def_kind_[w] == WireDef::Input || def_kind_[w] == WireDef::Hint)
            injected_.push_back(w);
    }
}

void Circuit::write_canonical(const std::function<void(std::string_view)>& sink) const {
    std::string buf;
    buf.reserve(1 << 16);
    auto flush = [&] {
        if (!buf.empty()) {
            sink(buf);
            buf.clear();
        }
    };

    buf += kHeader;
    buf += "\nfield ";
    buf += field_modulus_hex();
    buf += "\nwires ";
    append_dec(buf, wire_count_);
    buf += "\ninputs ";
    append_dec(buf, inputs_.size());
    for (uint32_t w : inputs_) {
        buf += ' ';
        append_dec(buf, w);
    }
    buf += "\npublics ";
    append_dec(buf, publics_.size());
    buf += '\n';
    for (const auto& [label, w] : publics_) {
        buf += "public ";
        buf += label;
        buf += ' ';
        append_dec(buf, w);
        buf += '\n';
    }
    buf += "hints ";
    append_dec(buf, hints_.size());
    buf += '\n';
    for (const Hint& h : hints_) {
        buf += "hint ";
        append_dec(buf, h.wire);
        switch (h.kind) {
        case HintKind::Bit:
            buf += " bit ";
            append_dec(buf, h.src);
            buf += ' ';
            append_dec(buf, h.arg);
            break;
        case HintKind::Inv:
            buf += " inv ";
            append_dec(buf, h.src);
            break;
        case HintKind::Quot:
            buf += " quot ";
            append_dec(buf, h.src);
            buf += ' ';
            append_dec(buf, h.arg);
            break;
        case HintKind::Rem:
            buf += " rem ";
            append_dec(buf, h.src);
            buf += ' ';
            append_dec(buf, h.arg);
            break;
        }
        buf += '\n';
        if (buf.size() > (1 << 15)) flush();
    }
    buf += "gates ";
    append_dec(buf, gates_.size());
    buf += '\n';
    for (const Gate& g : gates_) {
        switch (g.kind) {
        case GateKind::Add:
            buf += "add ";
            append_dec(buf, g.a);
            buf += ' ';
            append_dec(buf, g.b);
            buf += ' ';
            append_dec(buf, g.c);
            break;
        case GateKind::Mul:
            buf += "mul ";
            append_dec(buf, g.a);
            buf += ' ';
            append_dec(buf, g.b);
            buf += ' ';
            append_dec(buf, g.c);
            break;
        case GateKind::AddConst:
            buf += "addc ";
            append_dec(buf, g.a);
            buf += ' ';
            buf += constants_[g.b].to_hex();
            buf += ' ';
            append_dec(buf, g.c);
            break;
        case GateKind::MulConst:
            buf += "mulc ";
            append_dec(buf, g.a);
            buf += ' ';
            buf += constants_[g.b].to_hex();
            buf += ' ';
            append_dec(buf, g.c);
            break;
        case GateKind::AssertZero:
            buf += "zero ";
            append_dec(buf, g.a);
            break;
        }
        buf += '\n';
        if (buf.size() > (1 << 15)) flush();
    }
    buf += "end\n";
    flush();
}

std::string Circuit::serialize() const {
    std::string out;
    write_canonical([&](std::string_view s) { out.append(s); });
    return out;
}

Digest Circuit::compute_id() const {
    Sha256 h;
    write_canonical([&](std::string_view s) {
        h.update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    });
    return h.finalize();
}

Circuit Circuit::parse(std::string_view text) {
    LineReader r{text};
    if (r.next_line() != kHeader) throw Error(Errc::ParseError, "bad circuit header");

    Circuit c;
    {
        Tokens t(r.next_line());
        t.expect_size(2);
        if (t.at(0) != "field" || t.at(1) != field_modulus_hex())
            throw Error(Errc::ParseError, "unsupported field modulus");
    }
    {
        Tokens t(r.next_line());
        t.expect_size(2);
        if (t.at(0) != "wires") throw Error(Errc::ParseError, "expected wires line");
        uint64_t n = parse_u64(t.at(1));
        if (n == 0 || n > (1ull << 31)) throw Error(Errc::ParseError, "wire count out of range");
        c.wire_count_ = uint32_t(n);
    }
    {
        Tokens t(r.next_line());
        if (t.at(0) != "inputs") throw Error(Errc::ParseError, "expected inputs line");
        uint64_t n = parse_u64(t.at(1));
        t.expect_size(2 + n);
        for (uint64_t i = 0; i < n; ++i)
            c.inputs_.push_back(parse_wire(t.at(2 + i), c.wire_count_));
    }
    {
        Tokens t(r.next_line());
        t.expect_size(2);
        if (t.at(0) != "publics") throw Error(Errc::ParseError, "expected publics line");
        uint64_t n = parse_u64(t.at(1));
        for (uint64_t i = 0; i < n; ++i) {
            Tokens p(r.next_line());
            p.expect_size(3);
            if (p.at(0) != "public") throw Error(Errc::ParseError, "expected public line");
            std::string label(p.at(1));
            if (!valid_label(label)) throw Error(Errc::ParseError, "bad public label");
            c.publics_.emplace_back(label, parse_wire(p.at(2), c.wire_count_));
        }
    }
    {
        Tokens t(r.next_line());
        t.expect_size(2);
        if (t.at(0) != "hints") throw Error(Errc::ParseError, "expected hints line");
        uint64_t n = parse_u64(t.at(1));
        for (uint64_t i = 0; i < n; ++i) {
            Tokens p(r.next_line());
            if (p.at(0) != "hint") throw Error(Errc::ParseError, "expected hint line");
            uint32_t wire = parse_wire(p.at(1), c.wire_count_);
            std::string_view kind = p.at(2);
            if (kind == "bit") {
                p.expect_size(5);
                c.hints_.push_back(
                    {HintKind::Bit, wire, parse_wire(p.at(3), c.wire_count_), parse_u64(p.at(4))});
            } else if (kind == "inv") {
                p.expect_size(4);
                c.hints_.push_back({HintKind::Inv, wire, parse_wire(p.at(3), c.wire_count_), 0});
            } else if (kind == "quot" || kind == "rem") {
                p.expect_size(5);
                uint64_t m = parse_u64(p.at(4));
                if (m == 0) throw Error(Errc::ParseError, "zero divisor in hint");
                c.hints_.push_back({kind == "quot" ? HintKind::Quot : HintKind::Rem, wire,
                                    parse_wire(p.at(3), c.wire_count_), m});
            } else {
                throw Error(Errc::ParseError, "unknown hint kind");
            }
        }
    }
    {
        Tokens t(r.next_line());
        t.expect_size(2);
        if (t.at(0) != "gates") throw Error(Errc::ParseError, "expected gates line");
        uint64_t n = parse_u64(t.at(1));
        c.gates_.reserve(n);
        std::map<U256, uint32_t> const_idx;
        auto intern_const = [&](std::string_view hex) -> uint32_t {
            FieldElement k = FieldElement::from_hex(std::string(hex));
            if (k.to_hex() != hex) throw Error(Errc::ParseError, "non-canonical constant");
            auto [it, inserted] = const_idx.try_emplace(k.raw(), uint32_t(c.constants_.size()));
            if (inserted) c.constants_.push_back(k);
            return it->second;
        };
        for (uint64_t i = 0; i < n; ++i) {
            Tokens p(r.next_line());
            std::string_view op = p.at(0);
            if (op == "add" || op == "mul") {
                p.expect_size(4);
                c.gates_.push_back({op == "add" ? GateKind::Add : GateKind::Mul,
                                    parse_wire(p.at(1), c.wire_count_),
                                    parse_wire(p.at(2), c.wire_count_),
                                    parse_wire(p.at(3), c.wire_count_)});
            } else if (op == "addc" || op == "mulc") {
                p.expect_size(4);
                c.gates_.push_back({op == "addc" ? GateKind::AddConst : GateKind::MulConst,
                                    parse_wire(p.at(1), c.wire_count_), intern_const(p.at(2)),
                                    parse_wire(p.at(3), c.wire_count_)});
            } else if (op == "zero") {
                p.expect_size(2);
                c.gates_.push_back({GateKind::AssertZero, parse_wire(p.at(1), c.wire_count_), 0, 0});
            } else {
                throw Error(Errc::ParseError, "unknown gate \"" + std::string(op) + "\"");
            }
        }
    }
    if (r.next_line() != "end") throw Error(Errc::ParseError, "expected end line");
    if (!r.at_end()) throw Error(Errc::ParseError, "trailing data after end");

    try {
        c.build_derived_tables();
    } catch (const Error& e) {
        throw Error(Errc::ParseError, std::string("inconsistent circuit: ") + e.what());
    }
    c.id_ = c.compute_id();
    return c;
}

bool publics_match_circuit(const Circuit& c, const PublicInputs& publics) {
    if (publics.entries.size() != c.public_wires().size()) return false;
    for (size_t i = 0; i < publics.entries.size(); ++i) {
        if (publics.entries[i].first != c.public_wires()[i].first) return false;
    }
    return true;
}

Witness eval_witness(const Circuit& c, std::span<const FieldElement> private_inputs,
                     const PublicInputs& publics) {
    if (private_inputs.size() != c.input_wires().size())
        throw Error(Errc::ArityMismatch,
                    "expected " + std::to_string(c.input_wires().size()) + " private inputs, got " +
                        std::to_string(private_inputs.size()));
    if (!publics_match_circuit(c, publics))
        throw Error(Errc::ArityMismatch, "public inputs do not match the circuit layout");

    Witness w;
    w.values.assign(c.wire_count(), FieldElement());
    w.values[0] = FieldElement::one();

    for (uint32_t wire = 1; wire < c.wire_count(); ++wire) {
        uint32_t idx = c.def_index(wire);
        switch (c.def_kind(wire)) {
        case WireDef::One:
            break;
        case WireDef::Input:
            w.values[wire] = private_inputs[idx];
            break;
        case WireDef::Public:
            w.values[wire] = publics.entries[idx].second;
            break;
        case WireDef::Hint: {
            const Hint& h = c.hints()[idx];
            const FieldElement& src = w.values[h.src];
            switch (h.kind) {
            case HintKind::Bit:
                w.values[wire] =
                    src.canonical().bit(int(h.arg)) ? FieldElement::one() : FieldElement();
                break;
            case HintKind::Inv:
                w.values[wire] = src.is_zero() ? FieldElement() : src.inverse();
                break;
            case HintKind::Quot:
            case HintKind::Rem: {
                U256 q;
                uint64_t r = 0;
                u256_divmod_u64(src.canonical(), h.arg, q, r);
                w.values[wire] = (h.kind == HintKind::Quot) ? FieldElement::from_u256(q)
                                                            : FieldElement::from_u64(r);
                break;
            }
            }
            break;
        }
        case WireDef::Gate: {
            const Gate& g = c.gates()[idx];
            switch (g.kind) {
            case GateKind::Add:
                w.values[wire] = w.values[g.a] + w.values[g.b];
                break;
            case GateKind::Mul:
                w.values[wire] = w.values[g.a] * w.values[g.b];
                break;
            case GateKind::AddConst:
                w.values[wire] = w.values[g.a] + c.constants()[g.b];
                break;
            case GateKind::MulConst:
                w.values[wire] = w.values[g.a] * c.constants()[g.b];
                break;
            case GateKind::AssertZero:
                break;
            }
            break;
        }
        }
    }

    for (size_t i = 0; i < c.gates().size(); ++i) {
        const Gate& g = c.gates()[i];
        if (g.kind == GateKind::AssertZero && !w.values[g.a].is_zero())
            throw Error(Errc::UnsatisfiedConstraint, "gate " + std::to_string(i));
    }
    return w;
}

}  // namespace ffsuite
