#include "ffs/ledger.hpp"

#include <filesystem>
#include <fstream>

#include "ffs/io.hpp"

namespace ffsuite {

namespace {

void append_str(Bytes& out, const std::string& s) {
    append_u32_be(out, uint32_t(s.size()));
    append(out, s);
}

void append_blob64(Bytes& out, const Bytes& b) {
    append_u64_be(out, b.size());
    append(out, std::span<const uint8_t>(b.data(), b.size()));
}

struct TxReader {
    std::span<const uint8_t> data;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > data.size()) throw Error(Errc::ParseError, "truncated transaction");
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data[pos + i];
        pos += 8;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data[pos + i];
        pos += 4;
        return v;
    }
    std::string str() {
        uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(data.data() + pos), n);
        pos += n;
        return s;
    }
    Bytes blob64() {
        uint64_t n = u64();
        need(n);
        Bytes b(data.begin() + pos, data.begin() + pos + n);
        pos += n;
        return b;
    }
    Digest digest() {
        need(32);
        Digest d;
        std::copy(data.begin() + pos, data.begin() + pos + 32, d.begin());
        pos += 32;
        return d;
    }
    Bytes take(size_t n) {
        need(n);
        Bytes b(data.begin() + pos, data.begin() + pos + n);
        pos += n;
        return b;
    }
};

void append_point(Bytes& out, const CurvePoint& p) {
    Bytes ser = p.serialize();
    if (ser.size() == 1) {
        // pad infinity to a fixed 65-byte record for parse simplicity
        ser.resize(65, 0);
    }
    append(out, std::span<const uint8_t>(ser.data(), ser.size()));
}

CurvePoint read_point(TxReader& r) {
    Bytes raw = r.take(65);
    if (raw[0] == 0x00) return CurvePoint::infinity();
    return CurvePoint::deserialize_unchecked(raw);
}

void append_policy(Bytes& out, const AccessPolicy& p) {
    append_str(out, p.data_class);
    append_u64_be(out, p.expiry);
    append_u64_be(out, p.max_uses);
    append_u32_be(out, uint32_t(p.allowed_function_ids.size()));
    for (const Digest& d : p.allowed_function_ids) append(out, d);
}

AccessPolicy read_policy(TxReader& r) {
    AccessPolicy p;
    p.data_class = r.str();
    p.expiry = r.u64();
    p.max_uses = r.u64();
    uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) p.allowed_function_ids.insert(r.digest());
    return p;
}

bool valid_token(const std::string& s) {
    if (s.empty() || s.size() > 128) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

void require_token(const std::string& s, const char* what) {
    if (!valid_token(s))
        throw Error(Errc::ConfigError, std::string(what) + " must be a short [A-Za-z0-9_.-]+ token");
}

std::string fids_to_string(const std::set<Digest>& fids) {
    if (fids.empty()) return "*";
    std::string s;
    for (const Digest& d : fids) {
        if (!s.empty()) s += ',';
        s += to_hex(d);
    }
    return s;
}

}  // namespace

const char* tx_kind_name(TxKind k) {
    switch (k) {
    case TxKind::RegisterProvider: return "register_provider";
    case TxKind::UpdateProviderKey: return "update_provider_key";
    case TxKind::MintAccessToken: return "mint_access_token";
    case TxKind::CheckAccess: return "check_access";
    case TxKind::RegisterVerifier: return "register_verifier";
    case TxKind::SubmitProof: return "submit_proof";
    case TxKind::RevokeToken: return "revoke_token";
    }
    return "unknown";
}

Bytes AuditEntry::canonical_bytes() const {
    Bytes out;
    append_u64_be(out, index);
    append_u64_be(out, timestamp);
    append_str(out, action);
    append_str(out, actor);
    append_str(out, detail);
    append(out, payload_hash);
    return out;
}

Bytes Transaction::canonical_bytes() const {
    Bytes out;
    out.push_back(uint8_t(kind));
    append_u64_be(out, timestamp);
    append_str(out, actor);
    switch (kind) {
    case TxKind::RegisterProvider:
        append_point(out, key);
        append_u32_be(out, uint32_t(data_classes.size()));
        for (const std::string& c : data_classes) append_str(out, c);
        break;
    case TxKind::UpdateProviderKey:
        append_u64_be(out, token_id);
        append_point(out, key);
        break;
    case TxKind::MintAccessToken:
        append_str(out, analyst);
        append_policy(out, policy);
        break;
    case TxKind::CheckAccess:
        append_u64_be(out, token_id);
        append_str(out, data_class);
        append(out, function_id);
        break;
    case TxKind::RegisterVerifier:
        append(out, function_id);
        append(out, circuit_id);
        append_u64_be(out, circuit_text.size());
        append(out, circuit_text);
        break;
    case TxKind::SubmitProof:
        append(out, function_id);
        append_u64_be(out, provider_token);
        append_blob64(out, publics_bytes);
        append(out, signature);
        append_blob64(out, proof_bytes);
        break;
    case TxKind::RevokeToken:
        append_u64_be(out, token_id);
        break;
    }
    return out;
}

Transaction Transaction::from_bytes(std::span<const uint8_t> data) {
    TxReader r{data};
    Transaction tx;
    uint8_t kind = r.u8();
    if (kind < 1 || kind > 7) throw Error(Errc::ParseError, "unknown transaction kind");
    tx.kind = TxKind(kind);
    tx.timestamp = r.u64();
    tx.actor = r.str();
    switch (tx.kind) {
    case TxKind::RegisterProvider: {
        tx.key = read_point(r);
        uint32_t n = r.u32();
        for (uint32_t i = 0; i < n; ++i) tx.data_classes.insert(r.str());
        break;
    }
    case TxKind::UpdateProviderKey:
        tx.token_id = r.u64();
        tx.key = read_point(r);
        break;
    case TxKind::MintAccessToken:
        tx.analyst = r.str();
        tx.policy = read_policy(r);
        break;
    case TxKind::CheckAccess:
        tx.token_id = r.u64();
        tx.data_class = r.str();
        tx.function_id = r.digest();
        break;
    case TxKind::RegisterVerifier: {
        tx.function_id = r.digest();
        tx.circuit_id = r.digest();
        uint64_t n = r.u64();
        Bytes text = r.take(n);
        tx.circuit_text.assign(text.begin(), text.end());
        break;
    }
    case TxKind::SubmitProof: {
        tx.function_id = r.digest();
        tx.provider_token = r.u64();
        tx.publics_bytes = r.blob64();
        Bytes sig = r.take(64);
        std::copy(sig.begin(), sig.end(), tx.signature.begin());
        tx.proof_bytes = r.blob64();
        break;
    }
    case TxKind::RevokeToken:
        tx.token_id = r.u64();
        break;
    }
    if (r.pos != data.size()) throw Error(Errc::ParseError, "trailing transaction bytes");
    return tx;
}

Bytes encode_publics(const PublicInputs& publics) { return publics.canonical_bytes(); }

PublicInputs decode_publics(std::span<const uint8_t> data) {
    PublicInputs out;
    size_t pos = 0;
    while (pos < data.size()) {
        if (pos + 4 > data.size()) throw Error(Errc::ParseError, "truncated publics");
        uint32_t n = 0;
        for (int i = 0; i < 4; ++i) n = (n << 8) | data[pos + i];
        pos += 4;
        if (n == 0 || n > 256 || pos + n + 32 > data.size())
            throw Error(Errc::ParseError, "malformed publics entry");
        std::string label(reinterpret_cast<const char*>(data.data() + pos), n);
        pos += n;
        FieldElement v = FieldElement::from_bytes(data.subspan(pos, 32));
        pos += 32;
        out.entries.emplace_back(label, v);
    }
    return out;
}

Ledger Ledger::open(const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / "txlog.bin").string();
    if (!std::filesystem::exists(path)) write_file(path, std::string_view{});
    Ledger led = replay(dir);
    led.log_path_ = path;
    return led;
}

Ledger Ledger::replay(const std::string& dir) {
    std::string path = (std::filesystem::path(dir) / "txlog.bin").string();
    Bytes log = read_binary_file(path);
    Ledger led;
    size_t pos = 0;
    while (pos < log.size()) {
        if (pos + 4 > log.size()) throw Error(Errc::ParseError, "truncated transaction log");
        uint32_t n = uint32_t(log[pos]) | uint32_t(log[pos + 1]) << 8 |
                     uint32_t(log[pos + 2]) << 16 | uint32_t(log[pos + 3]) << 24;
        pos += 4;
        if (pos + n > log.size()) throw Error(Errc::ParseError, "truncated transaction record");
        Transaction tx = Transaction::from_bytes(std::span<const uint8_t>(log.data() + pos, n));
        pos += n;
        led.apply(tx);
    }
    return led;
}

void Ledger::persist(const Transaction& tx) {
    if (log_path_.empty()) return;
    Bytes record = tx.canonical_bytes();
    Bytes framed;
    framed.reserve(record.size() + 4);
    framed.push_back(uint8_t(record.size()));
    framed.push_back(uint8_t(record.size() >> 8));
    framed.push_back(uint8_t(record.size() >> 16));
    framed.push_back(uint8_t(record.size() >> 24));
    append(framed, std::span<const uint8_t>(record.data(), record.size()));
    std::ofstream out(log_path_, std::ios::binary | std::ios::app);
    if (!out) throw Error(Errc::IoError, "cannot append to " + log_path_);
    out.write(reinterpret_cast<const char*>(framed.data()), std::streamsize(framed.size()));
    if (!out) throw Error(Errc::IoError, "short append to " + log_path_);
}

void Ledger::append_audit(const Transaction& tx, const std::string& detail) {
    AuditEntry e;
    e.index = audit_.size();
    e.timestamp = tx.timestamp;
    e.action = tx_kind_name(tx.kind);
    e.actor = tx.actor;
    e.detail = detail;
    Bytes payload = tx.canonical_bytes();
    e.payload_hash = sha256(std::span<const uint8_t>(payload.data(), payload.size()));
    Digest prev{};
    if (!audit_.empty()) prev = audit_.back().entry_hash;
    Sha256 h;
    h.update(prev);
    Bytes eb = e.canonical_bytes();
    h.update(std::span<const uint8_t>(eb.data(), eb.size()));
    e.entry_hash = h.finalize();
    audit_.push_back(std::move(e));
}

TxResult Ledger::apply(const Transaction& tx) {
    TxResult res;
    switch (tx.kind) {
    case TxKind::RegisterProvider: {
        if (!tx.key.is_on_curve() || tx.key.is_infinity()) {
            res = {false, "InvalidPoint", 0};
            break;
        }
        uint64_t id = next_provider_id_++;
        providers_[id] = ProviderRecord{id, tx.actor, tx.key, tx.data_classes};
        res = {true, "Ok", id};
        break;
    }
    case TxKind::UpdateProviderKey: {
        auto it = providers_.find(tx.token_id);
        if (it == providers_.end()) {
            res = {false, "UnknownToken", 0};
        } else if (it->second.owner != tx.actor) {
            res = {false, "NotOwner", 0};
        } else if (!tx.key.is_on_curve() || tx.key.is_infinity()) {
            res = {false, "InvalidPoint", 0};
        } else {
            it->second.key = tx.key;
            res = {true, "Ok", tx.token_id};
        }
        break;
    }
    case TxKind::MintAccessToken: {
        bool is_provider = false;
        for (const auto& [id, rec] : providers_) {
            if (rec.owner == tx.actor && rec.data_classes.count(tx.policy.data_class)) {
                is_provider = true;
                break;
            }
        }
        if (!is_provider) {
            res = {false, "NotProvider", 0};
        } else {
            uint64_t id = next_token_id_++;
            tokens_[id] = AccessTokenRecord{id, tx.actor, tx.analyst, tx.policy, 0, false};
            res = {true, "Ok", id};
        }
        break;
    }
    case TxKind::CheckAccess: {
        auto it = tokens_.find(tx.token_id);
        if (it == tokens_.end()) {
            res = {false, "Denied(UnknownToken)", 0};
        } else if (it->second.revoked) {
            res = {false, "Denied(Revoked)", 0};
        } else if (it->second.policy.data_class != tx.data_class) {
            res = {false, "Denied(ClassMismatch)", 0};
        } else if (tx.timestamp >= it->second.policy.expiry) {
            res = {false, "Denied(Expired)", 0};
        } else if (it->second.uses >= it->second.policy.max_uses) {
            res = {false, "Denied(Exhausted)", 0};
        } else if (!it->second.policy.allowed_function_ids.empty() &&
                   !it->second.policy.allowed_function_ids.count(tx.function_id)) {
            res = {false, "Denied(FunctionNotAllowed)", 0};
        } else {
            ++it->second.uses;
            res = {true, "Granted", tx.token_id};
        }
        break;
    }
    case TxKind::RegisterVerifier: {
        if (verifiers_.count(tx.function_id)) {
            res = {false, "DuplicateFunction", 0};
            break;
        }
        Circuit parsed;
        try {
            parsed = Circuit::parse(tx.circuit_text);
        } catch (const Error&) {
            res = {false, "CircuitInvalid", 0};
            break;
        }
        if (parsed.id() != tx.circuit_id) {
            res = {false, "CircuitIdMismatch", 0};
            break;
        }
        VerifierEntry entry;
        entry.function_id = tx.function_id;
        entry.circuit_id = tx.circuit_id;
        entry.circuit = std::move(parsed);
        verifiers_.emplace(tx.function_id, std::move(entry));
        res = {true, "Ok", 0};
        break;
    }
    case TxKind::SubmitProof: {
        auto vit = verifiers_.find(tx.function_id);
        auto pit = providers_.find(tx.provider_token);
        if (vit == verifiers_.end()) {
            res = {false, "UnknownFunction", 0};
            break;
        }
        if (pit == providers_.end()) {
            res = {false, "UnknownProvider", 0};
            break;
        }
        PublicInputs publics;
        SchnorrSignature sig{};
        try {
            publics = decode_publics(tx.publics_bytes);
            sig = SchnorrSignature::deserialize(tx.signature);
        } catch (const Error&) {
            res = {false, "PreCheckFailed(Malformed)", 0};
            break;
        }
        const FieldElement* h_w = publics.find("h_w");
        if (!h_w) {
            res = {false, "PreCheckFailed(MissingDigest)", 0};
            break;
        }
        if (!schnorr_verify(pit->second.key, sig, *h_w)) {
            res = {false, "PreCheckFailed(SignatureInvalid)", 0};
            break;
        }
        Proof proof;
        try {
            proof = Proof::deserialize(tx.proof_bytes);
        } catch (const Error&) {
            res = {false, "VerifierRejected(Malformed)", 0};
            break;
        }
        VerifyResult vr = verify(vit->second.circuit, publics, proof);
        if (!vr.accepted) {
            res = {false, std::string("VerifierRejected(") + reject_reason_name(vr.reason) + ")",
                   0};
            break;
        }
        res = {true, "Accepted", 0};
        break;
    }
    case TxKind::RevokeToken: {
        auto it = tokens_.find(tx.token_id);
        if (it == tokens_.end()) {
            res = {false, "UnknownToken", 0};
        } else if (it->second.minter != tx.actor) {
            res = {false, "NotMinter", 0};
        } else if (it->second.revoked) {
            res = {false, "AlreadyRevoked", 0};
        } else {
            it->second.revoked = true;
            res = {true, "Ok", tx.token_id};
        }
        break;
    }
    }
    append_audit(tx, res.outcome);
    persist(tx);
    return res;
}

TxResult Ledger::register_provider(uint64_t now, const std::string& actor, const CurvePoint& key,
                                   const std::set<std::string>& data_classes) {
    require_token(actor, "actor");
    for (const std::string& c : data_classes) require_token(c, "data class");
    Transaction tx;
    tx.kind = TxKind::RegisterProvider;
    tx.timestamp = now;
    tx.actor = actor;
    tx.key = key;
    tx.data_classes = data_classes;
    return apply(tx);
}

TxResult Ledger::update_provider_key(uint64_t now, const std::string& actor, uint64_t token_id,
                                     const CurvePoint& new_key) {
    require_token(actor, "actor");
    Transaction tx;
    tx.kind = TxKind::UpdateProviderKey;
    tx.timestamp = now;
    tx.actor = actor;
    tx.token_id = token_id;
    tx.key = new_key;
    return apply(tx);
}

TxResult Ledger::mint_access_token(uint64_t now, const std::string& actor,
                                   const std::string& analyst, const AccessPolicy& policy) {
    require_token(actor, "actor");
    require_token(analyst, "analyst");
    require_token(policy.data_class, "data class");
    Transaction tx;
    tx.kind = TxKind::MintAccessToken;
    tx.timestamp = now;
    tx.actor = actor;
    tx.analyst = analyst;
    tx.policy = policy;
    return apply(tx);
}

TxResult Ledger::check_access(uint64_t now, const std::string& actor, uint64_t token_id,
                              const std::string& data_class, const Digest& function_id) {
    require_token(actor, "actor");
    require_token(data_class, "data class");
    Transaction tx;
    tx.kind = TxKind::CheckAccess;
    tx.timestamp = now;
    tx.actor = actor;
    tx.token_id = token_id;
    tx.data_class = data_class;
    tx.function_id = function_id;
    return apply(tx);
}

TxResult Ledger::register_verifier(uint64_t now, const std::string& actor,
                                   const Digest& function_id, const Digest& circuit_id,
                                   const Circuit& circuit) {
    require_token(actor, "actor");
    Transaction tx;
    tx.kind = TxKind::RegisterVerifier;
    tx.timestamp = now;
    tx.actor = actor;
    tx.function_id = function_id;
    tx.circuit_id = circuit_id;
    tx.circuit_text = circuit.serialize();
    return apply(tx);
}

TxResult Ledger::submit_proof(uint64_t now, const std::string& actor, const Digest& function_id,
                              uint64_t provider_token, const PublicInputs& publics,
                              const SchnorrSignature& signature, const Proof& proof) {
    require_token(actor, "actor");
    Transaction tx;
    tx.kind = TxKind::SubmitProof;
    tx.timestamp = now;
    tx.actor = actor;
    tx.function_id = function_id;
    tx.provider_token = provider_token;
    tx.publics_bytes = encode_publics(publics);
    tx.signature = signature.serialize();
    tx.proof_bytes = proof.serialize();
    return apply(tx);
}

TxResult Ledger::revoke_token(uint64_t now, const std::string& actor, uint64_t token_id) {
    require_token(actor, "actor");
    Transaction tx;
    tx.kind = TxKind::RevokeToken;
    tx.timestamp = now;
    tx.actor = actor;
    tx.token_id = token_id;
    return apply(tx);
}

const VerifierEntry* Ledger::verifier(const Digest& function_id) const {
    auto it = verifiers_.find(function_id);
    return it == verifiers_.end() ? nullptr : &it->second;
}

bool Ledger::verify_audit_chain() const {
    Digest prev{};
    for (size_t i = 0; i < audit_.size(); ++i) {
        const AuditEntry& e = audit_[i];
        if (e.index != i) return false;
        Sha256 h;
        h.update(prev);
        Bytes eb = e.canonical_bytes();
        h.update(std::span<const uint8_t>(eb.data(), eb.size()));
        if (h.finalize() != e.entry_hash) return false;
        prev = e.entry_hash;
    }
    return true;
}

std::string Ledger::state_body() const {
    std::string out;
    out += "next_provider_id " + std::to_string(next_provider_id_) + "\n";
    out += "next_token_id " + std::to_string(next_token_id_) + "\n";
    out += "providers " + std::to_string(providers_.size()) + "\n";
    for (const auto& [id, rec] : providers_) {
        out += "provider " + std::to_string(id) + " " + rec.owner + " " +
               to_hex(rec.key.serialize()) + " ";
        std::string classes;
        for (const std::string& c : rec.data_classes) {
            if (!classes.empty()) classes += ',';
            classes += c;
        }
        out += (classes.empty() ? "-" : classes) + "\n";
    }
    out += "tokens " + std::to_string(tokens_.size()) + "\n";
    for (const auto& [id, rec] : tokens_) {
        out += "token " + std::to_string(id) + " " + rec.minter + " " + rec.analyst + " " +
               rec.policy.data_class + " " + std::to_string(rec.policy.expiry) + " " +
               std::to_string(rec.policy.max_uses) + " " + std::to_string(rec.uses) + " " +
               (rec.revoked ? "1" : "0") + " " + fids_to_string(rec.policy.allowed_function_ids) +
               "\n";
    }
    out += "verifiers " + std::to_string(verifiers_.size()) + "\n";
    for (const auto& [fid, entry] : verifiers_) {
        std::string text = entry.circuit.serialize();
        out += "verifier " + to_hex(fid) + " " + to_hex(entry.circuit_id) + " " +
               std::to_string(text.size()) + "\n";
        out += text;
    }
    out += "audit " + std::to_string(audit_.size()) + "\n";
    for (const AuditEntry& e : audit_) {
        out += "entry " + std::to_string(e.index) + " " + std::to_string(e.timestamp) + " " +
               e.action + " " + e.actor + " " + e.detail + " " + to_hex(e.payload_hash) + " " +
               to_hex(e.entry_hash) + "\n";
    }
    out += "end\n";
    return out;
}

Digest Ledger::state_hash() const { return sha256(state_body()); }

std::string Ledger::export_snapshot() const {
    std::string body = state_body();
    return "ffs-ledger-state v1\nstate_hash " + to_hex(sha256(body)) + "\n" + body;
}

Ledger Ledger::import_snapshot(const std::string& text) {
    // header
    const std::string header = "ffs-ledger-state v1\n";
    if (text.rfind(header, 0) != 0) throw Error(Errc::ParseError, "bad snapshot header");
    size_t hash_end = text.find('\n', header.size());
    if (hash_end == std::string::npos) throw Error(Errc::ParseError, "truncated snapshot");
    std::string hash_line = text.substr(header.size(), hash_end - header.size());
    if (hash_line.rfind("state_hash ", 0) != 0)
        throw Error(Errc::ParseError, "missing state_hash line");
    std::string body = text.substr(hash_end + 1);
    if (to_hex(sha256(body)) != hash_line.substr(11))
        throw Error(Errc::ManifestMismatch, "snapshot state hash does not match its body");

    Ledger led;
    size_t pos = 0;
    auto next_line = [&]() {
        size_t nl = body.find('\n', pos);
        if (nl == std::string::npos) throw Error(Errc::ParseError, "truncated snapshot body");
        std::string line = body.substr(pos, nl - pos);
        pos = nl + 1;
        return line;
    };
    auto split = [](const std::string& line) {
        std::vector<std::string> parts;
        size_t i = 0;
        while (i < line.size()) {
            size_t j = line.find(' ', i);
            if (j == std::string::npos) j = line.size();
            parts.push_back(line.substr(i, j - i));
            i = j + 1;
        }
        return parts;
    };
    auto digest_of = [](const std::string& hex) {
        Bytes raw = from_hex(hex);
        if (raw.size() != 32) throw Error(Errc::ParseError, "bad digest length");
        Digest d;
        std::copy(raw.begin(), raw.end(), d.begin());
        return d;
    };

    {
        auto parts = split(next_line());
        if (parts.size() != 2 || parts[0] != "next_provider_id")
            throw Error(Errc::ParseError, "expected next_provider_id");
        led.next_provider_id_ = std::stoull(parts[1]);
    }
    {
        auto parts = split(next_line());
        if (parts.size() != 2 || parts[0] != "next_token_id")
            throw Error(Errc::ParseError, "expected next_token_id");
        led.next_token_id_ = std::stoull(parts[1]);
    }
    {
        auto head = split(next_line());
        if (head.size() != 2 || head[0] != "providers")
            throw Error(Errc::ParseError, "expected providers");
        size_t n = std::stoull(head[1]);
        for (size_t i = 0; i < n; ++i) {
            auto parts = split(next_line());
            if (parts.size() != 5 || parts[0] != "provider")
                throw Error(Errc::ParseError, "bad provider line");
            ProviderRecord rec;
            rec.token_id = std::stoull(parts[1]);
            rec.owner = parts[2];
            rec.key = CurvePoint::deserialize_unchecked(from_hex(parts[3]));
            if (parts[4] != "-") {
                size_t start = 0;
                const std::string& cs = parts[4];
                while (start <= cs.size()) {
                    size_t comma = cs.find(',', start);
                    if (comma == std::string::npos) comma = cs.size();
                    rec.data_classes.insert(cs.substr(start, comma - start));
                    start = comma + 1;
                    if (comma == cs.size()) break;
                }
            }
            led.providers_[rec.token_id] = std::move(rec);
        }
    }
    {
        auto head = split(next_line());
        if (head.size() != 2 || head[0] != "tokens") throw Error(Errc::ParseError, "expected tokens");
        size_t n = std::stoull(head[1]);
        for (size_t i = 0; i < n; ++i) {
            auto parts = split(next_line());
            if (parts.size() != 10 || parts[0] != "token")
                throw Error(Errc::ParseError, "bad token line");
            AccessTokenRecord rec;
            rec.token_id = std::stoull(parts[1]);
            rec.minter = parts[2];
            rec.analyst = parts[3];
            rec.policy.data_class = parts[4];
            rec.policy.expiry = std::stoull(parts[5]);
            rec.policy.max_uses = std::stoull(parts[6]);
            rec.uses = std::stoull(parts[7]);
            rec.revoked = parts[8] == "1";
            if (parts[9] != "*") {
                size_t start = 0;
                while (start < parts[9].size()) {
                    size_t comma = parts[9].find(',', start);
                    if (comma == std::string::npos) comma = parts[9].size();
                    rec.policy.allowed_function_ids.insert(
                        digest_of(parts[9].substr(start, comma - start)));
                    start = comma + 1;
                }
            }
            led.tokens_[rec.token_id] = std::move(rec);
        }
    }
    {
        auto head = split(next_line());
        if (head.size() != 2 || head[0] != "verifiers")
            throw Error(Errc::ParseError, "expected verifiers");
        size_t n = std::stoull(head[1]);
        for (size_t i = 0; i < n; ++i) {
            auto parts = split(next_line());
            if (parts.size() != 4 || parts[0] != "verifier")
                throw Error(Errc::ParseError, "bad verifier line");
            size_t len = std::stoull(parts[3]);
            if (pos + len > body.size()) throw Error(Errc::ParseError, "truncated circuit block");
            std::string text2 = body.substr(pos, len);
            pos += len;
            VerifierEntry entry;
            entry.function_id = digest_of(parts[1]);
            entry.circuit_id = digest_of(parts[2]);
            entry.circuit = Circuit::parse(text2);
            if (entry.circuit.id() != entry.circuit_id)
                throw Error(Errc::ManifestMismatch, "snapshot circuit does not match its id");
            led.verifiers_.emplace(entry.function_id, std::move(entry));
        }
    }
    {
        auto head = split(next_line());
        if (head.size() != 2 || head[0] != "audit") throw Error(Errc::ParseError, "expected audit");
        size_t n = std::stoull(head[1]);
        for (size_t i = 0; i < n; ++i) {
            auto parts = split(next_line());
            if (parts.size() != 8 || parts[0] != "entry")
                throw Error(Errc::ParseError, "bad audit line");
            AuditEntry e;
            e.index = std::stoull(parts[1]);
            e.timestamp = std::stoull(parts[2]);
            e.action = parts[3];
            e.actor = parts[4];
            e.detail = parts[5];
            e.payload_hash = digest_of(parts[6]);
            e.entry_hash = digest_of(parts[7]);
            led.audit_.push_back(std::move(e));
        }
    }
    if (next_line() != "end") throw Error(Errc::ParseError, "expected snapshot end");
    if (pos != body.size()) throw Error(Errc::ParseError, "trailing snapshot bytes");
    return led;
}

}  // namespace ffsuite
