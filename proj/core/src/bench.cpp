#include "ffs/bench.hpp"

#include <chrono>

#include "ffs/compiler.hpp"
#include "ffs/proof.hpp"
#include "ffs/rng.hpp"

namespace ffsuite {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<size_t>& sizes, uint32_t kappa, uint64_t seed,
                                unsigned threads) {
    if (sizes.empty()) throw Error(Errc::ConfigError, "bench needs at least one size");
    std::vector<BenchRow> rows;
    for (size_t n : sizes) {
        const size_t cols = 8;
        size_t mrows = n > cols ? (n - cols + cols - 1) / cols : 1;
        Rng rng(seed ^ (uint64_t(n) * 0x9e3779b97f4a7c15ull));

        CircuitConfig cfg;
        cfg.precision = 0;
        DataArray matrix;
        matrix.name = "matrix";
        matrix.kind = DataKind::Int;
        matrix.shape = {uint32_t(mrows), uint32_t(cols)};
        for (size_t i = 0; i < mrows * cols; ++i)
            matrix.ints.push_back(int64_t(rng.below(1u << 16)));
        DataArray vec;
        vec.name = "vector";
        vec.kind = DataKind::Int;
        vec.shape = {uint32_t(cols)};
        for (size_t i = 0; i < cols; ++i) vec.ints.push_back(int64_t(rng.below(1u << 16)));
        cfg.data.push_back(std::move(matrix));
        cfg.data.push_back(std::move(vec));
        KeyPair authority = KeyPair::generate(rng);
        cfg.authority.pk = authority.pk;
        cfg.authority.sk = authority.sk;
        cfg.function.name = "average_dot_products";
        cfg.function.args = {{"matrix", "matrix"}, {"vector", "vector"}};

        ArtifactBundle bundle = compile(cfg);
        Witness w = eval_witness(bundle.circuit, bundle.private_inputs, bundle.publics);

        BenchRow row;
        row.n = mrows * cols + cols;
        row.gates = bundle.circuit.mul_gate_count();
        row.t = reps_for_soundness(kappa);

        Rng prng(rng.next_u64());
        auto t0 = std::chrono::steady_clock::now();
        Proof proof = prove(bundle.circuit, w, bundle.publics, SoundnessTarget{kappa}, prng,
                            threads);
        row.prove_ms = ms_since(t0);

        auto t1 = std::chrono::steady_clock::now();
        VerifyResult res = verify(bundle.circuit, bundle.publics, proof);
        row.verify_ms = ms_since(t1);
        if (!res.accepted)
            throw Error(Errc::UnsatisfiedConstraint, "bench proof rejected: " + res.detail);

        row.proof_bytes = proof.serialize().size();
        rows.push_back(row);
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "n,gates,t,prove_ms,verify_ms,proof_bytes\n";
    for (const BenchRow& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.gates) + "," + std::to_string(r.t) +
               "," + std::to_string(r.prove_ms) + "," + std::to_string(r.verify_ms) + "," +
               std::to_string(r.proof_bytes) + "\n";
    }
    return out;
}

std::string bench_plot(const std::vector<BenchRow>& rows) {
    std::string out = "# n prove_ms verify_ms\n";
    for (const BenchRow& r : rows) {
        out += std::to_string(r.n) + " " + std::to_string(r.prove_ms) + " " +
               std::to_string(r.verify_ms) + "\n";
    }
    return out;
}

}  // namespace ffsuite
