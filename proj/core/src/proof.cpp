#include "ffs/proof.hpp"

#include <thread>

namespace ffsuite {

namespace {

void append_u16_le(Bytes& out, uint16_t v) {
    out.push_back(uint8_t(v));
    out.push_back(uint8_t(v >> 8));
}

void append_u32_le(Bytes& out, uint32_t v) {
    out.push_back(uint8_t(v));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 24));
}

struct ByteReader {
    std::span<const uint8_t> data;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > data.size()) throw Error(Errc::ParseError, "truncated proof");
    }
    uint16_t u16() {
        need(2);
        uint16_t v = uint16_t(data[pos]) | uint16_t(data[pos + 1]) << 8;
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | data[pos + i];
        pos += 4;
        return v;
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
    }
    Digest digest() {
        need(32);
        Digest d;
        std::copy(data.begin() + pos, data.begin() + pos + 32, d.begin());
        pos += 32;
        return d;
    }
    FieldElement field() {
        need(32);
        FieldElement f = FieldElement::from_bytes(data.subspan(pos, 32));
        pos += 32;
        return f;
    }
    bool done() const { return pos == data.size(); }
};

Digest derive_subseed(const Digest& master, const char* tag, uint32_t rep, uint8_t party) {
    Sha256 h;
    h.update(master);
    h.update(std::string(tag));
    h.update_u32_be(rep);
    uint8_t p = party;
    h.update(std::span<const uint8_t>(&p, 1));
    return h.finalize();
}

// Share of a public value by absolute party index: party 0 carries it whole.
inline FieldElement public_share(uint8_t party, const FieldElement& v) {
    return party == 0 ? v : FieldElement();
}

void check_witness(const Circuit& c, const Witness& w, const PublicInputs& publics) {
    if (w.values.size() != c.wire_count())
        throw Error(Errc::UnsatisfiedWitness, "witness size does not match the circuit");
    if (!publics_match_circuit(c, publics))
        throw Error(Errc::UnsatisfiedWitness, "public inputs do not match the circuit layout");
    if (w.values[0] != FieldElement::one())
        throw Error(Errc::UnsatisfiedWitness, "constant-one wire corrupted");
    for (uint32_t wire = 1; wire < c.wire_count(); ++wire) {
        uint32_t idx = c.def_index(wire);
        switch (c.def_kind(wire)) {
        case WireDef::Public:
            if (w.values[wire] != publics.entries[idx].second)
                throw Error(Errc::UnsatisfiedWitness, "public wire disagrees with publics");
            break;
        case WireDef::Gate: {
            const Gate& g = c.gates()[idx];
            FieldElement expect;
            switch (g.kind) {
            case GateKind::Add: expect = w.values[g.a] + w.values[g.b]; break;
            case GateKind::Mul: expect = w.values[g.a] * w.values[g.b]; break;
            case GateKind::AddConst: expect = w.values[g.a] + c.constants()[g.b]; break;
            case GateKind::MulConst: expect = w.values[g.a] * c.constants()[g.b]; break;
            case GateKind::AssertZero: continue;
            }
            if (w.values[wire] != expect)
                throw Error(Errc::UnsatisfiedWitness,
                            "gate equation violated at wire " + std::to_string(wire));
            break;
        }
        default:
            break;  // inputs and hints are free; the One wire was checked
        }
    }
    for (uint32_t aw : c.assert_wires()) {
        if (!w.values[aw].is_zero())
            throw Error(Errc::UnsatisfiedWitness, "assertion wire " + std::to_string(aw) +
                                                      " is nonzero");
    }
}

}  // namespace

uint32_t reps_for_soundness(uint32_t kappa) {
    if (kappa < 1) throw Error(Errc::ConfigError, "kappa must be at least 1");
    // smallest t with 3^t >= 2^(kappa + t)
    std::vector<uint64_t> pow3{1};
    uint32_t t = 0;
    auto bitlen = [](const std::vector<uint64_t>& v) {
        size_t top = v.size() - 1;
        uint64_t w = v[top];
        uint32_t n = 0;
        while (w) {
            ++n;
            w >>= 1;
        }
        return uint64_t(top) * 64 + n;
    };
    for (;;) {
        if (t > 0 && bitlen(pow3) >= uint64_t(kappa) + t + 1) return t;
        // pow3 *= 3
        uint64_t carry = 0;
        for (auto& w : pow3) {
            unsigned __int128 v = (unsigned __int128)w * 3 + carry;
            w = uint64_t(v);
            carry = uint64_t(v >> 64);
        }
        if (carry) pow3.push_back(carry);
        ++t;
    }
}

FieldElement tape_field(const Digest& seed, TapeDomain domain, uint64_t index) {
    Sha256 h;
    h.update(seed);
    uint8_t d = uint8_t(domain);
    h.update(std::span<const uint8_t>(&d, 1));
    h.update_u64_be(index);
    return FieldElement::from_bytes_mod(h.finalize());
}

Bytes ProofView::canonical_bytes() const {
    Bytes out;
    out.reserve(32 + 32 * (input_shares.size() + mul_shares.size()));
    append(out, seed);
    for (const FieldElement& f : input_shares) {
        auto b = f.to_bytes();
        append(out, b);
    }
    for (const FieldElement& f : mul_shares) {
        auto b = f.to_bytes();
        append(out, b);
    }
    return out;
}

Digest ProofView::commitment() const {
    Sha256 h;
    h.update(key);
    auto b = canonical_bytes();
    h.update(std::span<const uint8_t>(b.data(), b.size()));
    return h.finalize();
}

Bytes Proof::serialize() const {
    Bytes out;
    append(out, std::string("FFSP"));
    append_u16_le(out, version);
    append_u16_le(out, uint16_t(repetitions.size()));
    append(out, circuit_id);
    append(out, publics_hash);
    append_u32_le(out, injected_count);
    append_u32_le(out, mul_count);
    append_u32_le(out, output_count);
    for (const ProofRepetition& rep : repetitions) {
        for (const Digest& cmt : rep.commitments) append(out, cmt);
        for (const auto& shares : rep.output_shares) {
            for (const FieldElement& f : shares) {
                auto b = f.to_bytes();
                append(out, b);
            }
        }
        out.push_back(rep.opened);
        for (const ProofView& v : rep.views) {
            append(out, v.key);
            auto b = v.canonical_bytes();
            append(out, b);
        }
    }
    return out;
}

Proof Proof::deserialize(std::span<const uint8_t> data) {
    ByteReader r{data};
    r.need(4);
    if (!(data[0] == 'F' && data[1] == 'F' && data[2] == 'S' && data[3] == 'P'))
        throw Error(Errc::ParseError, "bad proof magic");
    r.pos = 4;

    Proof p;
    p.version = r.u16();
    if (p.version != 1) throw Error(Errc::ParseError, "unsupported proof version");
    uint16_t t = r.u16();
    if (t == 0) throw Error(Errc::ParseError, "zero repetitions");
    p.circuit_id = r.digest();
    p.publics_hash = r.digest();
    p.injected_count = r.u32();
    p.mul_count = r.u32();
    p.output_count = r.u32();
    if (uint64_t(p.injected_count) + p.mul_count + p.output_count > (1u << 28))
        throw Error(Errc::ParseError, "implausible proof dimensions");
    // exact size check before any allocation sized from header counts
    uint64_t view_bytes = 32 + 32 + 32ull * p.injected_count + 32ull * p.mul_count;
    uint64_t rep_bytes = 96 + 96ull * p.output_count + 1 + 2 * view_bytes;
    uint64_t expected = 4 + 2 + 2 + 32 + 32 + 12 + uint64_t(t) * rep_bytes;
    if (data.size() != expected)
        throw Error(Errc::ParseError, "proof size does not match its dimensions");

    p.repetitions.resize(t);
    for (ProofRepetition& rep : p.repetitions) {
        for (Digest& cmt : rep.commitments) cmt = r.digest();
        rep.output_shares.resize(p.output_count);
        for (auto& shares : rep.output_shares) {
            for (FieldElement& f : shares) f = r.field();
        }
        rep.opened = r.u8();
        if (rep.opened > 2) throw Error(Errc::ParseError, "opened index out of range");
        for (ProofView& v : rep.views) {
            v.key = r.digest();
            v.seed = r.digest();
            v.input_shares.resize(p.injected_count);
            for (FieldElement& f : v.input_shares) f = r.field();
            v.mul_shares.resize(p.mul_count);
            for (FieldElement& f : v.mul_shares) f = r.field();
        }
    }
    if (!r.done()) throw Error(Errc::ParseError, "trailing bytes after proof");
    return p;
}

std::vector<uint8_t> fiat_shamir(const Digest& circuit_id, const PublicInputs& publics,
                                 std::span<const ProofRepetition> repetitions) {
    Sha256 h;
    h.update("FFS-CH");
    h.update(circuit_id);
    auto pb = publics.canonical_bytes();
    h.update(std::span<const uint8_t>(pb.data(), pb.size()));
    for (const ProofRepetition& rep : repetitions) {
        for (const Digest& cmt : rep.commitments) h.update(cmt);
    }
    for (const ProofRepetition& rep : repetitions) {
        for (const auto& shares : rep.output_shares) {
            for (const FieldElement& f : shares) {
                auto b = f.to_bytes();
                h.update(b);
            }
        }
    }
    Digest seed = h.finalize();

    std::vector<uint8_t> challenges(repetitions.size());
    for (size_t j = 0; j < repetitions.size(); ++j) {
        Sha256 cj;
        cj.update(seed);
        cj.update_u32_be(uint32_t(j));
        Digest d = cj.finalize();
        // big-endian value mod 3
        uint32_t acc = 0;
        for (uint8_t byte : d) acc = (acc * 256 + byte) % 3;
        challenges[j] = uint8_t(acc);
    }
    return challenges;
}

const char* reject_reason_name(RejectReason r) {
    switch (r) {
    case RejectReason::HeaderMismatch: return "HeaderMismatch";
    case RejectReason::CommitmentMismatch: return "CommitmentMismatch";
    case RejectReason::GateInconsistency: return "GateInconsistency";
    case RejectReason::OutputMismatch: return "OutputMismatch";
    case RejectReason::ChallengeMismatch: return "ChallengeMismatch";
    }
    return "Unknown";
}

Proof prove(const Circuit& c, const Witness& w, const PublicInputs& publics,
            SoundnessTarget target, Rng& rng, unsigned threads) {
    check_witness(c, w, publics);
    uint32_t t = reps_for_soundness(target.kappa);
    if (t > 0xffff) throw Error(Errc::ConfigError, "repetition count exceeds the wire format");

    Digest master = rng.digest();

    // Full three-view repetitions first (challenges depend on all of them).
    struct FullRep {
        ProofRepetition rep;
        ProofView third;
    };
    std::vector<FullRep> full(t);

    auto worker = [&](uint32_t begin, uint32_t end) {
        for (uint32_t j = begin; j < end; ++j) {
            // run_repetition leaves views {0,1} in rep.views and view 2 must
            // be rebuilt here cheaply; instead we re-run with direct access.
            full[j].rep = ProofRepetition{};
            ProofView views[3];
            for (uint8_t party = 0; party < 3; ++party) {
                views[party].seed = derive_subseed(master, "FFS-SEED", j, party);
                views[party].key = derive_subseed(master, "FFS-KEY", j, party);
                views[party].input_shares.reserve(c.injected_wires().size());
                views[party].mul_shares.reserve(c.mul_gate_count());
            }
            std::vector<FieldElement> wires[3];
            for (auto& v : wires) v.assign(c.wire_count(), FieldElement());
            wires[0][0] = FieldElement::one();
            for (size_t idx = 0; idx < c.injected_wires().size(); ++idx) {
                uint32_t wire = c.injected_wires()[idx];
                FieldElement s0 = tape_field(views[0].seed, TapeDomain::InputShare, idx);
                FieldElement s1 = tape_field(views[1].seed, TapeDomain::InputShare, idx);
                FieldElement s2 = w.values[wire] - s0 - s1;
                wires[0][wire] = s0;
                wires[1][wire] = s1;
                wires[2][wire] = s2;
                views[0].input_shares.push_back(s0);
                views[1].input_shares.push_back(s1);
                views[2].input_shares.push_back(s2);
            }
            for (size_t idx = 0; idx < c.public_wires().size(); ++idx) {
                uint32_t wire = c.public_wires()[idx].second;
                for (uint8_t party = 0; party < 3; ++party)
                    wires[party][wire] = public_share(party, publics.entries[idx].second);
            }
            ProofRepetition& out = full[j].rep;
            size_t mul_ordinal = 0;
            for (const Gate& g : c.gates()) {
                switch (g.kind) {
                case GateKind::Add:
                    for (int i = 0; i < 3; ++i) wires[i][g.c] = wires[i][g.a] + wires[i][g.b];
                    break;
                case GateKind::AddConst:
                    for (int i = 0; i < 3; ++i)
                        wires[i][g.c] =
                            wires[i][g.a] + public_share(uint8_t(i), c.constants()[g.b]);
                    break;
                case GateKind::MulConst:
                    for (int i = 0; i < 3; ++i) wires[i][g.c] = wires[i][g.a] * c.constants()[g.b];
                    break;
                case GateKind::Mul: {
                    FieldElement r[3];
                    for (int i = 0; i < 3; ++i)
                        r[i] = tape_field(views[i].seed, TapeDomain::MulRandom, mul_ordinal);
                    for (int i = 0; i < 3; ++i) {
                        int k = (i + 1) % 3;
                        FieldElement z = wires[i][g.a] * wires[i][g.b] +
                                         wires[k][g.a] * wires[i][g.b] +
                                         wires[i][g.a] * wires[k][g.b] + r[i] - r[k];
                        wires[i][g.c] = z;
                        views[i].mul_shares.push_back(z);
                    }
                    ++mul_ordinal;
                    break;
                }
                case GateKind::AssertZero:
                    out.output_shares.push_back({wires[0][g.a], wires[1][g.a], wires[2][g.a]});
                    break;
                }
            }
            for (int i = 0; i < 3; ++i) out.commitments[i] = views[i].commitment();
            out.views[0] = std::move(views[0]);
            out.views[1] = std::move(views[1]);
            full[j].third = std::move(views[2]);
        }
    };

    if (threads <= 1 || t == 1) {
        worker(0, t);
    } else {
        unsigned n = std::min<unsigned>(threads, t);
        std::vector<std::thread> pool;
        uint32_t chunk = (t + n - 1) / n;
        for (unsigned i = 0; i < n; ++i) {
            uint32_t begin = i * chunk, end = std::min(t, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    Proof proof;
    proof.circuit_id = c.id();
    proof.publics_hash = publics.hash();
    proof.injected_count = uint32_t(c.injected_wires().size());
    proof.mul_count = uint32_t(c.mul_gate_count());
    proof.output_count = uint32_t(c.assert_wires().size());
    proof.repetitions.resize(t);
    for (uint32_t j = 0; j < t; ++j) proof.repetitions[j] = std::move(full[j].rep);

    std::vector<uint8_t> challenges = fiat_shamir(proof.circuit_id, publics, proof.repetitions);
    for (uint32_t j = 0; j < t; ++j) {
        ProofRepetition& rep = proof.repetitions[j];
        uint8_t e = challenges[j];
        rep.opened = e;
        // select views (e, e+1) out of {0, 1, third}
        ProofView all[3] = {std::move(rep.views[0]), std::move(rep.views[1]),
                            std::move(full[j].third)};
        rep.views[0] = std::move(all[e]);
        rep.views[1] = std::move(all[(e + 1) % 3]);
    }
    return proof;
}

VerifyResult verify(const Circuit& c, const PublicInputs& publics, const Proof& proof) {
    if (!publics_match_circuit(c, publics))
        return VerifyResult::reject(RejectReason::HeaderMismatch,
                                    "publics do not match the circuit layout");
    if (proof.circuit_id != c.id())
        return VerifyResult::reject(RejectReason::HeaderMismatch, "circuit id mismatch");
    if (proof.publics_hash != publics.hash())
        return VerifyResult::reject(RejectReason::HeaderMismatch, "publics hash mismatch");
    if (proof.injected_count != c.injected_wires().size() ||
        proof.mul_count != c.mul_gate_count() ||
        proof.output_count != c.assert_wires().size() || proof.repetitions.empty())
        return VerifyResult::reject(RejectReason::HeaderMismatch, "proof dimensions mismatch");

    std::vector<uint8_t> challenges = fiat_shamir(proof.circuit_id, publics, proof.repetitions);

    std::vector<FieldElement> wires_a(c.wire_count());
    std::vector<FieldElement> wires_b(c.wire_count());

    for (size_t j = 0; j < proof.repetitions.size(); ++j) {
        const ProofRepetition& rep = proof.repetitions[j];
        std::string at = " (repetition " + std::to_string(j) + ")";
        if (rep.opened != challenges[j])
            return VerifyResult::reject(RejectReason::ChallengeMismatch,
                                        "opened pair disagrees with the challenge" + at);
        uint8_t pa = rep.opened, pb = uint8_t((rep.opened + 1) % 3);
        const ProofView& va = rep.views[0];
        const ProofView& vb = rep.views[1];
        if (va.input_shares.size() != proof.injected_count ||
            vb.input_shares.size() != proof.injected_count ||
            va.mul_shares.size() != proof.mul_count || vb.mul_shares.size() != proof.mul_count)
            return VerifyResult::reject(RejectReason::HeaderMismatch, "view dimensions" + at);
        if (va.commitment() != rep.commitments[pa] || vb.commitment() != rep.commitments[pb])
            return VerifyResult::reject(RejectReason::CommitmentMismatch,
                                        "view commitment does not open" + at);

        // parties 0 and 1 must draw their input shares from their tapes
        for (uint8_t k = 0; k < 2; ++k) {
            const ProofView& v = (k == 0) ? va : vb;
            uint8_t party = (k == 0) ? pa : pb;
            if (party > 1) continue;
            for (size_t idx = 0; idx < v.input_shares.size(); ++idx) {
                if (v.input_shares[idx] != tape_field(v.seed, TapeDomain::InputShare, idx))
                    return VerifyResult::reject(RejectReason::GateInconsistency,
                                                "input share off-tape" + at);
            }
        }

        std::fill(wires_a.begin(), wires_a.end(), FieldElement());
        std::fill(wires_b.begin(), wires_b.end(), FieldElement());
        if (pa == 0) wires_a[0] = FieldElement::one();
        if (pb == 0) wires_b[0] = FieldElement::one();
        for (size_t idx = 0; idx < c.injected_wires().size(); ++idx) {
            uint32_t wire = c.injected_wires()[idx];
            wires_a[wire] = va.input_shares[idx];
            wires_b[wire] = vb.input_shares[idx];
        }
        for (size_t idx = 0; idx < c.public_wires().size(); ++idx) {
            uint32_t wire = c.public_wires()[idx].second;
            wires_a[wire] = public_share(pa, publics.entries[idx].second);
            wires_b[wire] = public_share(pb, publics.entries[idx].second);
        }

        size_t mul_ordinal = 0;
        size_t assert_ordinal = 0;
        for (size_t gi = 0; gi < c.gates().size(); ++gi) {
            const Gate& g = c.gates()[gi];
            switch (g.kind) {
            case GateKind::Add:
                wires_a[g.c] = wires_a[g.a] + wires_a[g.b];
                wires_b[g.c] = wires_b[g.a] + wires_b[g.b];
                break;
            case GateKind::AddConst:
                wires_a[g.c] = wires_a[g.a] + public_share(pa, c.constants()[g.b]);
                wires_b[g.c] = wires_b[g.a] + public_share(pb, c.constants()[g.b]);
                break;
            case GateKind::MulConst:
                wires_a[g.c] = wires_a[g.a] * c.constants()[g.b];
                wires_b[g.c] = wires_b[g.a] * c.constants()[g.b];
                break;
            case GateKind::Mul: {
                // party A is re-executed; party B's output is read from its view
                FieldElement ra = tape_field(va.seed, TapeDomain::MulRandom, mul_ordinal);
                FieldElement rb = tape_field(vb.seed, TapeDomain::MulRandom, mul_ordinal);
                FieldElement z = wires_a[g.a] * wires_a[g.b] + wires_b[g.a] * wires_a[g.b] +
                                 wires_a[g.a] * wires_b[g.b] + ra - rb;
                if (z != va.mul_shares[mul_ordinal])
                    return VerifyResult::reject(
                        RejectReason::GateInconsistency,
                        "multiplication gate " + std::to_string(mul_ordinal) + at);
                wires_a[g.c] = z;
                wires_b[g.c] = vb.mul_shares[mul_ordinal];
                ++mul_ordinal;
                break;
            }
            case GateKind::AssertZero: {
                const auto& shares = rep.output_shares[assert_ordinal];
                if (shares[pa] != wires_a[g.a] || shares[pb] != wires_b[g.a])
                    return VerifyResult::reject(RejectReason::OutputMismatch,
                                                "output share disagrees with the opened view" + at);
                if (!(shares[0] + shares[1] + shares[2]).is_zero())
                    return VerifyResult::reject(RejectReason::OutputMismatch,
                                                "output shares do not sum to the public value" + at);
                ++assert_ordinal;
                break;
            }
            }
        }
    }
    return VerifyResult::accept();
}

}  // namespace ffsuite
