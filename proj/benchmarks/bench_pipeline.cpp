#include <benchmark/benchmark.h>

#include "ffs/compiler.hpp"
#include "ffs/proof.hpp"
#include "ffs/rng.hpp"

using namespace ffsuite;

namespace {

ArtifactBundle sample_bundle(size_t rows, size_t cols, uint64_t seed) {
    Rng rng(seed);
    CircuitConfig cfg;
    DataArray m;
    m.name = "m";
    m.kind = DataKind::Int;
    m.shape = {uint32_t(rows), uint32_t(cols)};
    for (size_t i = 0; i < rows * cols; ++i) m.ints.push_back(int64_t(rng.below(1u << 16)));
    DataArray v;
    v.name = "v";
    v.kind = DataKind::Int;
    v.shape = {uint32_t(cols)};
    for (size_t i = 0; i < cols; ++i) v.ints.push_back(int64_t(rng.below(1u << 16)));
    cfg.data = {m, v};
    KeyPair kp = KeyPair::generate(rng);
    cfg.authority.pk = kp.pk;
    cfg.authority.sk = kp.sk;
    cfg.function.name = "average_dot_products";
    cfg.function.args = {{"matrix", "m"}, {"vector", "v"}};
    return compile(cfg);
}

}  // namespace

static void CompileStatement(benchmark::State& state) {
    size_t rows = size_t(state.range(0));
    for (auto _ : state) {
        ArtifactBundle b = sample_bundle(rows, 8, 42);
        benchmark::DoNotOptimize(b.circuit.mul_gate_count());
    }
    state.SetComplexityN(int64_t(rows * 8));
}
BENCHMARK(CompileStatement)->Arg(4)->Arg(16)->Arg(64)->Complexity();

static void ProveStatement(benchmark::State& state) {
    ArtifactBundle bundle = sample_bundle(size_t(state.range(0)), 8, 43);
    Witness w = eval_witness(bundle.circuit, bundle.private_inputs, bundle.publics);
    for (auto _ : state) {
        Rng rng(44);
        Proof p = prove(bundle.circuit, w, bundle.publics, SoundnessTarget{4}, rng);
        benchmark::DoNotOptimize(p);
    }
    state.SetComplexityN(int64_t(bundle.circuit.mul_gate_count()));
}
BENCHMARK(ProveStatement)->Arg(4)->Arg(16)->Complexity();

static void VerifyStatement(benchmark::State& state) {
    ArtifactBundle bundle = sample_bundle(size_t(state.range(0)), 8, 45);
    Witness w = eval_witness(bundle.circuit, bundle.private_inputs, bundle.publics);
    Rng rng(46);
    Proof p = prove(bundle.circuit, w, bundle.publics, SoundnessTarget{4}, rng);
    for (auto _ : state) {
        VerifyResult res = verify(bundle.circuit, bundle.publics, p);
        benchmark::DoNotOptimize(res.accepted);
    }
}
BENCHMARK(VerifyStatement)->Arg(4)->Arg(16);
