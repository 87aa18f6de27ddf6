// ffs — prove and verify signed-data statements, and run the simulated
// policy ledger. Exit codes: 0 success, 1 domain rejection, 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>

#include "ffs/bench.hpp"
#include "ffs/compiler.hpp"
#include "ffs/io.hpp"
#include "ffs/ledger.hpp"
#include "ffs/proof.hpp"
#include "ffs/sponge.hpp"

using namespace ffsuite;

namespace {

uint64_t fresh_seed() {
    std::random_device rd;
    return (uint64_t(rd()) << 32) | rd();
}

Digest digest_from_hex(const std::string& hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 32) throw Error(Errc::ParseError, "expected a 32-byte hex digest");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

// function selector: 64 hex chars = literal id, anything else = canonical name
Digest function_selector(const std::string& s) {
    if (s.size() == 64) {
        bool hex = true;
        for (char c : s) hex = hex && hex_nibble(c) >= 0;
        if (hex) return digest_from_hex(s);
    }
    return sha256(s);
}

CurvePoint read_public_key(const std::string& path) {
    Bytes raw = read_binary_file(path);
    return CurvePoint::deserialize(raw);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        if (comma > start) out.push_back(s.substr(start, comma - start));
        if (comma == s.size()) break;
        start = comma + 1;
    }
    return out;
}

int report(const TxResult& res) {
    std::cout << res.outcome;
    if (res.id) std::cout << " id=" << res.id;
    std::cout << "\n";
    return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-knowledge proofs of provenance-bound statements"};
    app.require_subcommand(1);

    std::string keys_dir = "keys";
    std::string ledger_dir = "ledger";
    std::string out_path;
    uint32_t kappa = 80;
    uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 1;
    uint64_t now = 0;
    std::string actor = "operator";

    app.add_option("--keys", keys_dir, "key directory");
    app.add_option("--ledger", ledger_dir, "ledger directory");
    app.add_option("--out", out_path, "output file or directory");
    app.add_option("--kappa", kappa, "soundness bits");
    auto* seed_opt = app.add_option("--seed", seed, "deterministic randomness seed");
    app.add_option("--threads", threads, "prover worker threads");
    app.add_option("--now", now, "logical timestamp for ledger transactions");
    app.add_option("--actor", actor, "acting account for ledger transactions");

    // keygen
    std::string key_name = "authority";
    auto* cmd_keygen = app.add_subcommand("keygen", "generate a key pair into the key directory");
    cmd_keygen->add_option("--name", key_name, "key file base name");

    // sign-data
    std::string sign_config;
    auto* cmd_sign = app.add_subcommand("sign-data", "hash a config's data and sign the digest");
    cmd_sign->add_option("config", sign_config, "statement config (json)")->required();

    // compile
    std::string compile_config;
    auto* cmd_compile = app.add_subcommand("compile", "compile a config into an artifact bundle");
    cmd_compile->add_option("config", compile_config, "statement config (json)")->required();

    // prove
    std::string prove_bundle;
    auto* cmd_prove = app.add_subcommand("prove", "produce a proof for a compiled bundle");
    cmd_prove->add_option("bundle", prove_bundle, "bundle directory")->required();

    // verify
    std::string verify_bundle, verify_proof;
    auto* cmd_verify = app.add_subcommand("verify", "verify a proof against a bundle");
    cmd_verify->add_option("bundle", verify_bundle, "bundle directory")->required();
    cmd_verify->add_option("proof", verify_proof, "proof file")->required();

    // bench
    std::string bench_sizes = "64,256,1024,4096";
    auto* cmd_bench = app.add_subcommand("bench", "proving-time scalability report");
    cmd_bench->add_option("--sizes", bench_sizes, "comma-separated element counts");

    // ledger family
    auto* cmd_ledger = app.add_subcommand("ledger", "policy ledger operations");
    cmd_ledger->require_subcommand(1);
    auto* led_init = cmd_ledger->add_subcommand("init", "create an empty ledger");

    std::string reg_keyfile, reg_classes;
    auto* led_register = cmd_ledger->add_subcommand("register-provider", "register a data provider");
    led_register->add_option("--key", reg_keyfile, "provider public key file")->required();
    led_register->add_option("--classes", reg_classes, "comma-separated data classes")->required();

    uint64_t rot_token = 0;
    std::string rot_keyfile;
    auto* led_rotate = cmd_ledger->add_subcommand("rotate-key", "update a provider public key");
    led_rotate->add_option("--token", rot_token, "provider token id")->required();
    led_rotate->add_option("--key", rot_keyfile, "new public key file")->required();

    std::string mint_analyst, mint_class, mint_allow;
    uint64_t mint_expiry = 0, mint_max_uses = 0;
    auto* led_mint = cmd_ledger->add_subcommand("mint-token", "mint an analyst access token");
    led_mint->add_option("--analyst", mint_analyst)->required();
    led_mint->add_option("--class", mint_class, "data class")->required();
    led_mint->add_option("--expiry", mint_expiry, "expiry timestamp (exclusive)")->required();
    led_mint->add_option("--max-uses", mint_max_uses)->required();
    led_mint->add_option("--allow-functions", mint_allow,
                         "comma-separated function names or ids (empty: unrestricted)");

    uint64_t chk_token = 0;
    std::string chk_class, chk_function;
    auto* led_check = cmd_ledger->add_subcommand("check-access", "evaluate an access request");
    led_check->add_option("--token", chk_token)->required();
    led_check->add_option("--class", chk_class)->required();
    led_check->add_option("--function", chk_function)->required();

    std::string regv_bundle;
    auto* led_regv = cmd_ledger->add_subcommand("register-verifier",
                                                "register a bundle's circuit as a verifier");
    led_regv->add_option("--bundle", regv_bundle)->required();

    std::string sub_bundle, sub_proof;
    uint64_t sub_provider = 0;
    auto* led_submit = cmd_ledger->add_subcommand("submit-proof", "pre-check and dispatch a proof");
    led_submit->add_option("--bundle", sub_bundle)->required();
    led_submit->add_option("--proof", sub_proof)->required();
    led_submit->add_option("--provider-token", sub_provider)->required();

    uint64_t rev_token = 0;
    auto* led_revoke = cmd_ledger->add_subcommand("revoke", "revoke an access token");
    led_revoke->add_option("--token", rev_token)->required();

    auto* led_audit = cmd_ledger->add_subcommand("audit", "print the audit log");
    auto* led_chain = cmd_ledger->add_subcommand("verify-chain", "recompute the audit hash chain");

    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (CLI::App* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    seed_set = seed_opt->count() > 0;

    try {
        if (*cmd_keygen) {
            Rng rng(seed_set ? seed : fresh_seed());
            KeyPair kp = KeyPair::generate(rng);
            std::filesystem::create_directories(keys_dir);
            auto base = std::filesystem::path(keys_dir) / key_name;
            auto sk = kp.sk.to_bytes();
            write_file(base.string() + ".sk", std::span<const uint8_t>(sk.data(), sk.size()));
            Bytes pk = kp.pk.serialize();
            write_file(base.string() + ".pk", std::span<const uint8_t>(pk.data(), pk.size()));
            std::cout << "public_key " << to_hex(pk) << "\n";
            return 0;
        }
        if (*cmd_sign) {
            CircuitConfig cfg = CircuitConfig::from_json_file(sign_config);
            if (!cfg.authority.sk)
                throw Error(Errc::ConfigError, "sign-data needs an authority keyfile");
            FlattenedData flat = flatten_data(cfg);
            FieldDigest h_w = sponge_hash(flat.all);
            SchnorrSignature sig =
                schnorr_sign(KeyPair{*cfg.authority.sk, cfg.authority.pk}, h_w);
            std::string sig_path =
                out_path.empty()
                    ? (std::filesystem::path(sign_config).parent_path() / "signature.bin").string()
                    : out_path;
            auto sig_bytes = sig.serialize();
            write_file(sig_path, std::span<const uint8_t>(sig_bytes.data(), sig_bytes.size()));
            std::cout << "h_w " << h_w.to_hex() << "\nsignature " << sig_path << "\n";
            return 0;
        }
        if (*cmd_compile) {
            CircuitConfig cfg = CircuitConfig::from_json_file(compile_config);
            ArtifactBundle bundle = compile(cfg);
            std::string dir = out_path.empty() ? "bundle" : out_path;
            bundle.emit(dir);
            std::cout << "bundle " << dir << "\n"
                      << "circuit_id " << to_hex(bundle.circuit.id()) << "\n"
                      << "function_id " << to_hex(bundle.function_id) << "\n"
                      << "mul_gates " << bundle.circuit.mul_gate_count() << "\n"
                      << "native " << bundle.native.to_string() << "\n";
            return 0;
        }
        if (*cmd_prove) {
            ArtifactBundle bundle = ArtifactBundle::load(prove_bundle);
            Witness w = eval_witness(bundle.circuit, bundle.private_inputs, bundle.publics);
            Rng rng(seed_set ? seed : fresh_seed());
            Proof proof = prove(bundle.circuit, w, bundle.publics, SoundnessTarget{kappa}, rng,
                                threads);
            Bytes bytes = proof.serialize();
            std::string path = out_path.empty()
                                   ? (std::filesystem::path(prove_bundle) / "proof.bin").string()
                                   : out_path;
            write_file(path, std::span<const uint8_t>(bytes.data(), bytes.size()));
            std::cout << "proof " << path << "\nrepetitions " << proof.repetitions.size()
                      << "\nbytes " << bytes.size() << "\n";
            return 0;
        }
        if (*cmd_verify) {
            ArtifactBundle bundle = ArtifactBundle::load(verify_bundle);
            Bytes bytes = read_binary_file(verify_proof);
            Proof proof = Proof::deserialize(bytes);
            if (!schnorr_verify(bundle.authority_pk, bundle.signature, bundle.h_w())) {
                std::cout << "SignatureInvalid\n";
                return 1;
            }
            VerifyResult res = verify(bundle.circuit, bundle.publics, proof);
            if (!res.accepted) {
                std::cout << reject_reason_name(res.reason) << " " << res.detail << "\n";
                return 1;
            }
            std::cout << "Accepted\n";
            return 0;
        }
        if (*cmd_bench) {
            std::vector<size_t> sizes;
            for (const std::string& s : split_commas(bench_sizes)) sizes.push_back(std::stoull(s));
            std::vector<BenchRow> rows =
                run_bench(sizes, kappa, seed_set ? seed : fresh_seed(), threads);
            std::string dir = out_path.empty() ? "bench-report" : out_path;
            std::filesystem::create_directories(dir);
            write_file((std::filesystem::path(dir) / "report.csv").string(), bench_csv(rows));
            write_file((std::filesystem::path(dir) / "plot.dat").string(), bench_plot(rows));
            std::cout << bench_csv(rows);
            return 0;
        }

        // ledger family
        if (*led_init) {
            Ledger::open(ledger_dir);
            std::cout << "Ok\n";
            return 0;
        }
        Ledger led = Ledger::open(ledger_dir);
        if (*led_register) {
            std::set<std::string> classes;
            for (const std::string& c : split_commas(reg_classes)) classes.insert(c);
            return report(
                led.register_provider(now, actor, read_public_key(reg_keyfile), classes));
        }
        if (*led_rotate) {
            return report(
                led.update_provider_key(now, actor, rot_token, read_public_key(rot_keyfile)));
        }
        if (*led_mint) {
            AccessPolicy policy;
            policy.data_class = mint_class;
            policy.expiry = mint_expiry;
            policy.max_uses = mint_max_uses;
            for (const std::string& f : split_commas(mint_allow))
                policy.allowed_function_ids.insert(function_selector(f));
            return report(led.mint_access_token(now, actor, mint_analyst, policy));
        }
        if (*led_check) {
            return report(
                led.check_access(now, actor, chk_token, chk_class, function_selector(chk_function)));
        }
        if (*led_regv) {
            ArtifactBundle bundle = ArtifactBundle::load(regv_bundle);
            return report(led.register_verifier(now, actor, bundle.function_id,
                                                bundle.circuit.id(), bundle.circuit));
        }
        if (*led_submit) {
            ArtifactBundle bundle = ArtifactBundle::load(sub_bundle);
            Proof proof = Proof::deserialize(read_binary_file(sub_proof));
            return report(led.submit_proof(now, actor, bundle.function_id, sub_provider,
                                           bundle.publics, bundle.signature, proof));
        }
        if (*led_revoke) {
            return report(led.revoke_token(now, actor, rev_token));
        }
        if (*led_audit) {
            for (const AuditEntry& e : led.audit()) {
                std::cout << e.index << " t=" << e.timestamp << " " << e.action << " actor="
                          << e.actor << " " << e.detail << " " << to_hex(e.entry_hash) << "\n";
            }
            return 0;
        }
        if (*led_chain) {
            bool ok = led.verify_audit_chain();
            std::cout << (ok ? "ChainOk" : "ChainBroken") << " entries=" << led.audit().size()
                      << " state=" << to_hex(led.state_hash()) << "\n";
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
