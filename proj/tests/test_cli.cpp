#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <unistd.h>

#include "ffs/io.hpp"

// Drives the installed binary end to end through a shell. Slow path; the
// heavy lifting is covered by library tests, this exercises wiring, flags,
// and exit codes.

namespace {

std::string work_dir() {
    static std::string dir = [] {
        auto p = std::filesystem::temp_directory_path() /
                 ("ffs-cli-" + std::to_string(::getpid()));
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p.string();
    }();
    return dir;
}

int run(const std::string& args) {
    std::string cmd = "cd " + work_dir() + " && " + FFS_TOOL_PATH + " " + args +
                      " >> cli.log 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli happy path: keygen, compile, prove, verify, ledger submit") {
    using ffsuite::write_file;
    const char* config = R"({
      "version": 1,
      "precision": 2,
      "data": [
        {"name": "m", "kind": "int", "shape": [2, 2], "values": [[3, 1], [4, 1]]},
        {"name": "v", "kind": "double", "shape": [2], "values": [1.5, 2.25]}
      ],
      "authority": {"keyfile": "keys/auth.sk"},
      "function": {"name": "average_dot_products", "args": {"matrix": "m", "vector": "v"}}
    })";
    write_file(work_dir() + "/config.json", std::string_view(config));

    REQUIRE(run("keygen --keys keys --name auth --seed 11") == 0);
    REQUIRE(run("sign-data config.json") == 0);
    REQUIRE(run("compile config.json --out bundle") == 0);
    REQUIRE(run("prove bundle --kappa 6 --seed 12") == 0);
    REQUIRE(run("verify bundle bundle/proof.bin") == 0);

    REQUIRE(run("ledger init --ledger led") == 0);
    REQUIRE(run("ledger register-provider --ledger led --actor auth --key keys/auth.pk "
                "--classes health --now 1") == 0);
    REQUIRE(run("ledger register-verifier --ledger led --actor auth --bundle bundle --now 2") ==
            0);
    REQUIRE(run("ledger mint-token --ledger led --actor auth --analyst carol --class health "
                "--expiry 100 --max-uses 3 --now 3") == 0);
    REQUIRE(run("ledger check-access --ledger led --actor carol --token 1 --class health "
                "--function average_dot_products --now 4") == 0);
    REQUIRE(run("ledger submit-proof --ledger led --actor carol --bundle bundle "
                "--proof bundle/proof.bin --provider-token 1 --now 5") == 0);
    REQUIRE(run("ledger verify-chain --ledger led") == 0);
    REQUIRE(run("ledger audit --ledger led") == 0);

    // the audit log records the accepted submission
    std::string log = ffsuite::read_text_file(work_dir() + "/cli.log");
    CHECK(log.find("Accepted") != std::string::npos);
    CHECK(log.find("ChainOk") != std::string::npos);
}

TEST_CASE("cli rejects a tampered publics file with a header mismatch") {
    using ffsuite::read_text_file;
    using ffsuite::write_file;
    // builds on the happy-path artifacts
    std::string publics = read_text_file(work_dir() + "/bundle/publics.txt");
    std::string tampered = publics;
    size_t pos = tampered.find("public y_q ");
    REQUIRE(pos != std::string::npos);
    // nudge the first hex digit of the claimed quotient
    size_t digit = pos + 11;
    tampered[digit] = tampered[digit] == '1' ? '2' : '1';
    write_file(work_dir() + "/bundle/publics.txt", tampered);

    CHECK(run("verify bundle bundle/proof.bin") == 1);
    std::string log = read_text_file(work_dir() + "/cli.log");
    CHECK(log.find("HeaderMismatch") != std::string::npos);

    write_file(work_dir() + "/bundle/publics.txt", publics);  // restore
    CHECK(run("verify bundle bundle/proof.bin") == 0);
}

TEST_CASE("cli denies over-budget access with exit code 1") {
    REQUIRE(run("ledger check-access --ledger led --actor carol --token 1 --class health "
                "--function average_dot_products --now 200") == 1);
}

TEST_CASE("cli usage errors exit with code 2") {
    CHECK(run("frobnicate") == 2);
    CHECK(run("") == 2);
    CHECK(run("prove") == 2);
    CHECK(run("ledger") == 2);
}

TEST_CASE("cli bench emits a parseable report") {
    REQUIRE(run("bench --sizes 16,32 --kappa 1 --seed 5 --out bench") == 0);
    std::string csv = ffsuite::read_text_file(work_dir() + "/bench/report.csv");
    CHECK(csv.rfind("n,gates,t,prove_ms,verify_ms,proof_bytes\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    std::string plot = ffsuite::read_text_file(work_dir() + "/bench/plot.dat");
    CHECK(plot.rfind("# n prove_ms verify_ms\n", 0) == 0);

    // fixed seed reproduces gate counts and proof sizes
    REQUIRE(run("bench --sizes 16,32 --kappa 1 --seed 5 --out bench2") == 0);
    std::string csv2 = ffsuite::read_text_file(work_dir() + "/bench2/report.csv");
    auto strip_times = [](const std::string& s) {
        // keep n, gates, t, proof_bytes columns only
        std::string out;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t nl = s.find('\n', pos);
            std::string line = s.substr(pos, nl - pos);
            std::vector<std::string> cols;
            size_t c = 0;
            while (c <= line.size()) {
                size_t comma = line.find(',', c);
                if (comma == std::string::npos) comma = line.size();
                cols.push_back(line.substr(c, comma - c));
                c = comma + 1;
                if (comma == line.size()) break;
            }
            if (cols.size() == 6) out += cols[0] + "," + cols[1] + "," + cols[2] + "," + cols[5] + "\n";
            pos = nl + 1;
        }
        return out;
    };
    CHECK(strip_times(csv) == strip_times(csv2));
}
