#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "ffs/compiler.hpp"
#include "ffs/ledger.hpp"
#include "ffs/proof.hpp"
#include "ffs/rng.hpp"

using namespace ffsuite;

namespace {

std::string temp_dir(const char* tag) {
    static int counter = 0;
    auto p = std::filesystem::temp_directory_path() /
             ("ffs-ledger-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

struct PipelineFixture {
    KeyPair provider_key;
    ArtifactBundle bundle;
    Proof proof;

    explicit PipelineFixture(uint64_t seed) : provider_key(), bundle(), proof() {
        Rng rng(seed);
        provider_key = KeyPair::generate(rng);
        CircuitConfig cfg;
        DataArray m;
        m.name = "m";
        m.kind = DataKind::Int;
        m.shape = {2, 2};
        m.ints = {int64_t(rng.below(1000)), int64_t(rng.below(1000)), int64_t(rng.below(1000)),
                  int64_t(rng.below(1000))};
        DataArray v;
        v.name = "v";
        v.kind = DataKind::Int;
        v.shape = {2};
        v.ints = {int64_t(rng.below(1000)), int64_t(rng.below(1000))};
        cfg.data = {m, v};
        cfg.authority.pk = provider_key.pk;
        cfg.authority.sk = provider_key.sk;
        cfg.function.name = "average_dot_products";
        cfg.function.args = {{"matrix", "m"}, {"vector", "v"}};
        bundle = compile(cfg);
        Witness w = eval_witness(bundle.circuit, bundle.private_inputs, bundle.publics);
        Rng prng(seed ^ 0xabcdef);
        proof = prove(bundle.circuit, w, bundle.publics, SoundnessTarget{4}, prng);
    }
};

Digest fid(const char* name) { return sha256(std::string(name)); }

}  // namespace

TEST_CASE("provider registration mints sequential ids and audits every call") {
    Ledger led;
    Rng rng(0x1e0);
    KeyPair k1 = KeyPair::generate(rng), k2 = KeyPair::generate(rng);
    TxResult r1 = led.register_provider(1, "alice", k1.pk, {"health"});
    CHECK(r1.ok);
    CHECK(r1.id == 1);
    CHECK(led.audit().size() == 1);
    TxResult r2 = led.register_provider(2, "bob", k2.pk, {"finance"});
    CHECK(r2.id == 2);
    CHECK(led.audit().size() == 2);
    CHECK(led.providers().at(1).owner == "alice");

    // off-curve key rejected but still audited
    CurvePoint bad(FieldElement::from_u64(5), FieldElement::from_u64(5));
    TxResult r3 = led.register_provider(3, "mallory", bad, {"health"});
    CHECK_FALSE(r3.ok);
    CHECK(r3.outcome == "InvalidPoint");
    CHECK(led.audit().size() == 3);
}

TEST_CASE("key rotation enforces ownership") {
    Ledger led;
    Rng rng(0x1e1);
    KeyPair k1 = KeyPair::generate(rng), k2 = KeyPair::generate(rng);
    led.register_provider(1, "alice", k1.pk, {"health"});
    CHECK(led.update_provider_key(2, "alice", 1, k2.pk).ok);
    CHECK(led.providers().at(1).key == k2.pk);
    CHECK(led.update_provider_key(3, "bob", 1, k1.pk).outcome == "NotOwner");
    CHECK(led.update_provider_key(4, "alice", 99, k1.pk).outcome == "UnknownToken");
}

TEST_CASE("access token minting requires provider status for the class") {
    Ledger led;
    Rng rng(0x1e2);
    KeyPair kp = KeyPair::generate(rng);
    led.register_provider(1, "alice", kp.pk, {"health"});
    AccessPolicy policy{"health", 100, 3, {}};
    TxResult ok = led.mint_access_token(2, "alice", "carol", policy);
    CHECK(ok.ok);
    CHECK(ok.id == 1);
    AccessPolicy other{"finance", 100, 3, {}};
    CHECK(led.mint_access_token(3, "alice", "carol", other).outcome == "NotProvider");
    CHECK(led.mint_access_token(4, "eve", "carol", policy).outcome == "NotProvider");

    // policy stays as minted across unrelated operations
    led.check_access(5, "carol", ok.id, "health", fid("dot_product"));
    const AccessTokenRecord& rec = led.tokens().at(ok.id);
    CHECK(rec.policy.expiry == 100);
    CHECK(rec.policy.max_uses == 3);
    CHECK(rec.policy.data_class == "health");
}

TEST_CASE("check_access walks the full policy gauntlet") {
    Ledger led;
    Rng rng(0x1e3);
    KeyPair kp = KeyPair::generate(rng);
    led.register_provider(1, "alice", kp.pk, {"health"});
    AccessPolicy policy{"health", 100, 2, {fid("average_dot_products")}};
    uint64_t token = led.mint_access_token(2, "alice", "carol", policy).id;

    CHECK(led.check_access(3, "carol", 99, "health", fid("average_dot_products")).outcome ==
          "Denied(UnknownToken)");
    CHECK(led.check_access(4, "carol", token, "finance", fid("average_dot_products")).outcome ==
          "Denied(ClassMismatch)");
    CHECK(led.check_access(100, "carol", token, "health", fid("average_dot_products")).outcome ==
          "Denied(Expired)");
    CHECK(led.check_access(5, "carol", token, "health", fid("dot_product")).outcome ==
          "Denied(FunctionNotAllowed)");

    TxResult g1 = led.check_access(6, "carol", token, "health", fid("average_dot_products"));
    CHECK(g1.outcome == "Granted");
    CHECK(led.tokens().at(token).uses == 1);
    CHECK(led.check_access(7, "carol", token, "health", fid("average_dot_products")).ok);
    CHECK(led.check_access(8, "carol", token, "health", fid("average_dot_products")).outcome ==
          "Denied(Exhausted)");

    // revocation by the minter
    CHECK(led.revoke_token(9, "bob", token).outcome == "NotMinter");
    CHECK(led.revoke_token(10, "alice", token).ok);
    CHECK(led.check_access(11, "carol", token, "health", fid("average_dot_products")).outcome ==
          "Denied(Revoked)");
}

TEST_CASE("verifier registry enforces uniqueness and circuit ids") {
    Ledger led;
    CircuitBuilder b;
    uint32_t x = b.add_input();
    uint32_t y = b.add_public("y");
    b.assert_equal(b.mul(x, x), y);
    Circuit c = b.finalize();

    CHECK(led.register_verifier(1, "admin", fid("square"), c.id(), c).ok);
    CHECK(led.register_verifier(2, "admin", fid("square"), c.id(), c).outcome ==
          "DuplicateFunction");
    Digest wrong{};
    wrong[0] = 1;
    CHECK(led.register_verifier(3, "admin", fid("other"), wrong, c).outcome ==
          "CircuitIdMismatch");
    CHECK(led.verifier(fid("square")) != nullptr);
    CHECK(led.verifier(fid("missing")) == nullptr);
}

TEST_CASE("submit_proof: pre-check, dispatch, verification, and audit") {
    PipelineFixture fx(0x1e4);
    Ledger led;
    uint64_t provider =
        led.register_provider(1, "hospital", fx.provider_key.pk, {"health"}).id;
    led.register_verifier(2, "admin", fx.bundle.function_id, fx.bundle.circuit.id(),
                          fx.bundle.circuit);

    SUBCASE("honest submission accepted") {
        TxResult res = led.submit_proof(3, "carol", fx.bundle.function_id, provider,
                                        fx.bundle.publics, fx.bundle.signature, fx.proof);
        CHECK(res.ok);
        CHECK(res.outcome == "Accepted");
        CHECK(led.audit().back().detail == "Accepted");
    }
    SUBCASE("unknown function and provider") {
        CHECK(led.submit_proof(3, "carol", fid("nope"), provider, fx.bundle.publics,
                               fx.bundle.signature, fx.proof)
                  .outcome == "UnknownFunction");
        CHECK(led.submit_proof(4, "carol", fx.bundle.function_id, 99, fx.bundle.publics,
                               fx.bundle.signature, fx.proof)
                  .outcome == "UnknownProvider");
    }
    SUBCASE("signature over a different digest fails the pre-check") {
        PublicInputs altered = fx.bundle.publics;
        altered.set("h_w", *fx.bundle.publics.find("h_w") + FieldElement::one());
        TxResult res = led.submit_proof(3, "carol", fx.bundle.function_id, provider, altered,
                                        fx.bundle.signature, fx.proof);
        CHECK(res.outcome == "PreCheckFailed(SignatureInvalid)");
    }
    SUBCASE("claimed result altered after proving is rejected by the verifier") {
        // sign the altered publics so the pre-check passes and the proof
        // binding does the rejecting
        PublicInputs altered = fx.bundle.publics;
        altered.set("y_q", *fx.bundle.publics.find("y_q") + FieldElement::one());
        TxResult res = led.submit_proof(3, "carol", fx.bundle.function_id, provider, altered,
                                        fx.bundle.signature, fx.proof);
        CHECK(res.outcome == "VerifierRejected(HeaderMismatch)");
    }
    SUBCASE("malformed proof bytes") {
        Transaction tx;
        tx.kind = TxKind::SubmitProof;
        tx.timestamp = 9;
        tx.actor = "carol";
        tx.function_id = fx.bundle.function_id;
        tx.provider_token = provider;
        tx.publics_bytes = encode_publics(fx.bundle.publics);
        tx.signature = fx.bundle.signature.serialize();
        tx.proof_bytes = {1, 2, 3};
        CHECK(led.apply(tx).outcome == "VerifierRejected(Malformed)");
    }
    SUBCASE("every mutated submission field is rejected") {
        Rng rng(0x1e4f);
        Transaction base;
        base.kind = TxKind::SubmitProof;
        base.timestamp = 9;
        base.actor = "carol";
        base.function_id = fx.bundle.function_id;
        base.provider_token = provider;
        base.publics_bytes = encode_publics(fx.bundle.publics);
        base.signature = fx.bundle.signature.serialize();
        base.proof_bytes = fx.proof.serialize();
        REQUIRE(led.apply(base).outcome == "Accepted");

        for (int i = 0; i < 40; ++i) {
            Transaction tx = base;
            std::string field;
            switch (i % 5) {
            case 0:
                tx.function_id[rng.below(32)] ^= uint8_t(1 + rng.below(255));
                field = "function_id";
                break;
            case 1:
                tx.provider_token += 1 + rng.below(100);
                field = "provider_token";
                break;
            case 2:
                tx.publics_bytes[rng.below(tx.publics_bytes.size())] ^=
                    uint8_t(1 + rng.below(255));
                field = "publics";
                break;
            case 3:
                tx.signature[rng.below(64)] ^= uint8_t(1 + rng.below(255));
                field = "signature";
                break;
            case 4:
                tx.proof_bytes[rng.below(tx.proof_bytes.size())] ^= uint8_t(1 + rng.below(255));
                field = "proof";
                break;
            }
            TxResult res = led.apply(tx);
            CHECK_MESSAGE(!res.ok, "mutated ", field, " accepted: ", res.outcome);
        }
    }
}

TEST_CASE("proofs signed under a rotated-away key fail the pre-check") {
    PipelineFixture fx(0x1e5);
    Ledger led;
    Rng rng(0x1e5f);
    uint64_t provider =
        led.register_provider(1, "hospital", fx.provider_key.pk, {"health"}).id;
    led.register_verifier(2, "admin", fx.bundle.function_id, fx.bundle.circuit.id(),
                          fx.bundle.circuit);
    CHECK(led.submit_proof(3, "carol", fx.bundle.function_id, provider, fx.bundle.publics,
                           fx.bundle.signature, fx.proof)
              .ok);

    KeyPair fresh = KeyPair::generate(rng);
    CHECK(led.update_provider_key(4, "hospital", provider, fresh.pk).ok);
    TxResult res = led.submit_proof(5, "carol", fx.bundle.function_id, provider,
                                    fx.bundle.publics, fx.bundle.signature, fx.proof);
    CHECK(res.outcome == "PreCheckFailed(SignatureInvalid)");
}

TEST_CASE("audit chain detects mutations and truncation forgeries") {
    Ledger led;
    Rng rng(0x1e6);
    KeyPair kp = KeyPair::generate(rng);
    led.register_provider(1, "alice", kp.pk, {"health"});
    AccessPolicy policy{"health", 50, 5, {}};
    uint64_t token = led.mint_access_token(2, "alice", "carol", policy).id;
    for (uint64_t i = 0; i < 4; ++i)
        led.check_access(3 + i, "carol", token, "health", fid("dot_product"));
    REQUIRE(led.verify_audit_chain());

    SUBCASE("mutating a historical entry breaks the chain") {
        std::string snapshot = led.export_snapshot();
        Ledger copy = Ledger::import_snapshot(snapshot);
        REQUIRE(copy.verify_audit_chain());
        // the snapshot is text; attack the detail field of entry 2
        size_t pos = snapshot.find("mint_access_token alice");
        REQUIRE(pos != std::string::npos);
        std::string forged = snapshot;
        forged.replace(pos, 17, "mint_access_tokex");
        // recompute the body hash so the snapshot parses, then the audit
        // chain itself must catch the forgery
        size_t body_start = forged.find('\n', forged.find('\n') + 1) + 1;
        std::string body = forged.substr(body_start);
        std::string rehashed =
            "ffs-ledger-state v1\nstate_hash " + to_hex(sha256(body)) + "\n" + body;
        Ledger tampered = Ledger::import_snapshot(rehashed);
        CHECK_FALSE(tampered.verify_audit_chain());
    }

    SUBCASE("truncating the log and grafting the original head breaks the chain") {
        // keep the first two entries, then claim the original final entry:
        // its predecessor hash no longer matches
        std::string snapshot = led.export_snapshot();
        size_t audit_pos = snapshot.find("\naudit ");
        REQUIRE(audit_pos != std::string::npos);
        std::string head = snapshot.substr(0, audit_pos + 1);
        std::vector<std::string> entries;
        size_t pos = audit_pos + 1;
        while (true) {
            size_t nl = snapshot.find('\n', pos);
            std::string line = snapshot.substr(pos, nl - pos);
            pos = nl + 1;
            if (line.rfind("entry ", 0) == 0) entries.push_back(line);
            if (line == "end") break;
        }
        REQUIRE(entries.size() >= 4);
        std::string forged_body = head.substr(head.find('\n', head.find('\n') + 1) + 1);
        // rebuild the body with audit = first 2 entries + original last entry,
        // renumbering the forged head to look contiguous
        size_t body_audit = forged_body.find("audit ");
        forged_body = forged_body.substr(0, body_audit);
        forged_body += "audit 3\n" + entries[0] + "\n" + entries[1] + "\n";
        std::string last = entries.back();
        // rewrite its index field to 2
        size_t sp1 = last.find(' ') + 1;
        size_t sp2 = last.find(' ', sp1);
        last = last.substr(0, sp1) + "2" + last.substr(sp2);
        forged_body += last + "\nend\n";
        std::string rehashed =
            "ffs-ledger-state v1\nstate_hash " + to_hex(sha256(forged_body)) + "\n" + forged_body;
        Ledger tampered = Ledger::import_snapshot(rehashed);
        CHECK_FALSE(tampered.verify_audit_chain());
    }
}

TEST_CASE("replaying a randomized 120-transaction log reproduces state_hash") {
    std::string dir = temp_dir("replay");
    Rng rng(0x1e7);
    Digest original;
    {
        Ledger led = Ledger::open(dir);
        std::vector<KeyPair> keys;
        std::vector<uint64_t> tokens;
        for (int i = 0; i < 120; ++i) {
            uint64_t now = i + 1;
            switch (rng.below(6)) {
            case 0: {
                KeyPair kp = KeyPair::generate(rng);
                keys.push_back(kp);
                led.register_provider(now, "p" + std::to_string(rng.below(5)), kp.pk, {"health"});
                break;
            }
            case 1: {
                AccessPolicy policy{"health", now + rng.below(40), 1 + rng.below(4), {}};
                TxResult res = led.mint_access_token(
                    now, "p" + std::to_string(rng.below(5)), "a" + std::to_string(rng.below(3)),
                    policy);
                if (res.ok) tokens.push_back(res.id);
                break;
            }
            case 2:
                led.check_access(now, "a" + std::to_string(rng.below(3)),
                                 tokens.empty() ? 1 : tokens[rng.below(tokens.size())], "health",
                                 fid("dot_product"));
                break;
            case 3:
                led.revoke_token(now, "p" + std::to_string(rng.below(5)),
                                 tokens.empty() ? 1 : tokens[rng.below(tokens.size())]);
                break;
            case 4:
                if (!keys.empty()) {
                    KeyPair fresh = KeyPair::generate(rng);
                    led.update_provider_key(now, "p" + std::to_string(rng.below(5)),
                                            1 + rng.below(keys.size()), fresh.pk);
                }
                break;
            case 5: {
                CircuitBuilder b;
                uint32_t x = b.add_input();
                uint32_t y = b.add_public("y");
                b.assert_equal(b.add_const(x, rng.field_element()), y);
                Circuit c = b.finalize();
                Digest f{};
                auto fb = rng.bytes(32);
                std::copy(fb.begin(), fb.end(), f.begin());
                led.register_verifier(now, "admin", f, c.id(), c);
                break;
            }
            }
        }
        REQUIRE(led.verify_audit_chain());
        original = led.state_hash();
    }
    Ledger replayed = Ledger::replay(dir);
    CHECK(replayed.state_hash() == original);
    CHECK(replayed.verify_audit_chain());

    Ledger reopened = Ledger::open(dir);
    CHECK(reopened.state_hash() == original);
}

TEST_CASE("snapshot export/import round-trips and authenticates") {
    Ledger led;
    Rng rng(0x1e8);
    KeyPair kp = KeyPair::generate(rng);
    led.register_provider(1, "alice", kp.pk, {"health", "genomics"});
    AccessPolicy policy{"health", 50, 5, {fid("dot_product"), fid("weighted_sum")}};
    led.mint_access_token(2, "alice", "carol", policy);

    std::string snapshot = led.export_snapshot();
    Ledger back = Ledger::import_snapshot(snapshot);
    CHECK(back.state_hash() == led.state_hash());
    CHECK(back.export_snapshot() == snapshot);
    CHECK(back.tokens().at(1).policy.allowed_function_ids.size() == 2);

    std::string corrupted = snapshot;
    corrupted[corrupted.find("alice")] = 'b';
    CHECK_THROWS_AS(Ledger::import_snapshot(corrupted), Error);
}

TEST_CASE("policy model: randomized operations never over-grant") {
    Ledger led;
    Rng rng(0x1e9);
    KeyPair kp = KeyPair::generate(rng);
    led.register_provider(0, "alice", kp.pk, {"health"});

    struct Shadow {
        uint64_t expiry;
        uint64_t max_uses;
        uint64_t grants = 0;
        bool revoked = false;
    };
    std::map<uint64_t, Shadow> shadow;

    for (int step = 0; step < 10000; ++step) {
        uint64_t now = rng.below(200);
        switch (rng.below(4)) {
        case 0: {
            AccessPolicy policy{"health", rng.below(200), rng.below(4), {}};
            TxResult res = led.mint_access_token(now, "alice", "carol", policy);
            REQUIRE(res.ok);
            shadow[res.id] = Shadow{policy.expiry, policy.max_uses};
            break;
        }
        case 1:
        case 2: {
            if (shadow.empty()) break;
            auto it = shadow.begin();
            std::advance(it, rng.below(shadow.size()));
            TxResult res = led.check_access(now, "carol", it->first, "health", fid("f"));
            if (res.ok) {
                ++it->second.grants;
                // a grant is legal only strictly before expiry, within use
                // budget, and while unrevoked
                REQUIRE(now < it->second.expiry);
                REQUIRE(it->second.grants <= it->second.max_uses);
                REQUIRE_FALSE(it->second.revoked);
            }
            break;
        }
        case 3: {
            if (shadow.empty()) break;
            auto it = shadow.begin();
            std::advance(it, rng.below(shadow.size()));
            if (led.revoke_token(now, "alice", it->first).ok) it->second.revoked = true;
            break;
        }
        }
    }
    REQUIRE(led.verify_audit_chain());
}
