#pragma once

// Deterministic single-writer state machine simulating the on-chain side:
// provider registry, policy-scoped access tokens, a verifier registry with
// dispatch, the public-input pre-check, and a hash-chained audit log.
//
// Time is a logical timestamp carried by every transaction. Every applied
// transaction — including denials and domain failures — appends exactly one
// audit entry, so replaying the persisted transaction log from genesis
// reproduces the state hash bit-exactly.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffs/circuit.hpp"
#include "ffs/curve.hpp"
#include "ffs/proof.hpp"
#include "ffs/sign.hpp"

namespace ffsuite {

struct AccessPolicy {
    std::string data_class;
    uint64_t expiry = 0;     // grant requires now < expiry
    uint64_t max_uses = 0;   // grant requires uses < max_uses
    std::set<Digest> allowed_function_ids;  // empty set: no function restriction
};

struct ProviderRecord {
    uint64_t token_id = 0;
    std::string owner;
    CurvePoint key;
    std::set<std::string> data_classes;
};

struct AccessTokenRecord {
    uint64_t token_id = 0;
    std::string minter;
    std::string analyst;
    AccessPolicy policy;
    uint64_t uses = 0;
    bool revoked = false;
};

struct VerifierEntry {
    Digest function_id{};
    Digest circuit_id{};
    Circuit circuit;
};

struct AuditEntry {
    uint64_t index = 0;
    uint64_t timestamp = 0;
    std::string action;
    std::string actor;
    std::string detail;      // single-token outcome, e.g. Accepted, Denied(Expired)
    Digest payload_hash{};   // sha256 of the transaction's canonical bytes
    Digest entry_hash{};     // sha256(previous entry_hash || canonical entry bytes)

    Bytes canonical_bytes() const;
};

enum class TxKind : uint8_t {
    RegisterProvider = 1,
    UpdateProviderKey = 2,
    MintAccessToken = 3,
    CheckAccess = 4,
    RegisterVerifier = 5,
    SubmitProof = 6,
    RevokeToken = 7,
};

const char* tx_kind_name(TxKind k);

struct Transaction {
    TxKind kind = TxKind::RegisterProvider;
    uint64_t timestamp = 0;
    std::string actor;

    CurvePoint key;                          // RegisterProvider, UpdateProviderKey
    std::set<std::string> data_classes;      // RegisterProvider
    uint64_t token_id = 0;                   // UpdateProviderKey, CheckAccess, RevokeToken
    std::string analyst;                     // MintAccessToken
    AccessPolicy policy;                     // MintAccessToken
    std::string data_class;                  // CheckAccess
    Digest function_id{};                    // CheckAccess, RegisterVerifier, SubmitProof
    Digest circuit_id{};                     // RegisterVerifier
    std::string circuit_text;                // RegisterVerifier
    uint64_t provider_token = 0;             // SubmitProof
    Bytes publics_bytes;                     // SubmitProof (canonical publics)
    std::array<uint8_t, 64> signature{};     // SubmitProof
    Bytes proof_bytes;                       // SubmitProof

    Bytes canonical_bytes() const;
    static Transaction from_bytes(std::span<const uint8_t> data);
};

struct TxResult {
    bool ok = false;
    std::string outcome;  // audit detail: Ok, Accepted, Denied(...), NotOwner, ...
    uint64_t id = 0;      // minted token id when applicable
};

/// Canonical encoding of labeled public inputs for transport inside
/// transactions: u32-BE label length || label || 32-byte value, repeated.
Bytes encode_publics(const PublicInputs& publics);
PublicInputs decode_publics(std::span<const uint8_t> data);

class Ledger {
public:
    Ledger() = default;

    /// Opens (creating if needed) a persistent ledger at dir/txlog.bin and
    /// replays the existing log.
    static Ledger open(const std::string& dir);
    /// Pure replay of a persisted log; never writes.
    static Ledger replay(const std::string& dir);

    /// Applies one transaction: mutates state, appends an audit entry, and
    /// appends the record to the log when persistent.
    TxResult apply(const Transaction& tx);

    // operation helpers (build the transaction and apply it)
    TxResult register_provider(uint64_t now, const std::string& actor, const CurvePoint& key,
                               const std::set<std::string>& data_classes);
    TxResult update_provider_key(uint64_t now, const std::string& actor, uint64_t token_id,
                                 const CurvePoint& new_key);
    TxResult mint_access_token(uint64_t now, const std::string& actor, const std::string& analyst,
                               const AccessPolicy& policy);
    TxResult check_access(uint64_t now, const std::string& actor, uint64_t token_id,
                          const std::string& data_class, const Digest& function_id);
    TxResult register_verifier(uint64_t now, const std::string& actor, const Digest& function_id,
                               const Digest& circuit_id, const Circuit& circuit);
    TxResult submit_proof(uint64_t now, const std::string& actor, const Digest& function_id,
                          uint64_t provider_token, const PublicInputs& publics,
                          const SchnorrSignature& signature, const Proof& proof);
    TxResult revoke_token(uint64_t now, const std::string& actor, uint64_t token_id);

    const std::map<uint64_t, ProviderRecord>& providers() const { return providers_; }
    const std::map<uint64_t, AccessTokenRecord>& tokens() const { return tokens_; }
    const VerifierEntry* verifier(const Digest& function_id) const;
    const std::vector<AuditEntry>& audit() const { return audit_; }

    /// Recomputes every entry hash from genesis.
    bool verify_audit_chain() const;

    /// sha256 over the canonical state serialization.
    Digest state_hash() const;
    std::string export_snapshot() const;
    static Ledger import_snapshot(const std::string& text);

private:
    void append_audit(const Transaction& tx, const std::string& detail);
    void persist(const Transaction& tx);
    std::string state_body() const;

    std::map<uint64_t, ProviderRecord> providers_;
    std::map<uint64_t, AccessTokenRecord> tokens_;
    std::map<Digest, VerifierEntry> verifiers_;
    std::vector<AuditEntry> audit_;
    uint64_t next_provider_id_ = 1;
    uint64_t next_token_id_ = 1;
    std::string log_path_;  // empty: in-memory only
};

}  // namespace ffsuite
