#include <benchmark/benchmark.h>

#include "ffs/curve.hpp"
#include "ffs/rng.hpp"
#include "ffs/sha256.hpp"
#include "ffs/sign.hpp"
#include "ffs/sponge.hpp"

using namespace ffsuite;

static void FieldMul(benchmark::State& state) {
    Rng rng(1);
    FieldElement a = rng.field_element(), b = rng.field_element();
    for (auto _ : state) {
        a = a * b;
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(FieldMul);

static void FieldInverse(benchmark::State& state) {
    Rng rng(2);
    FieldElement a = rng.field_element();
    for (auto _ : state) {
        a = a.inverse() + FieldElement::one();
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(FieldInverse);

static void Sha256Block(benchmark::State& state) {
    Rng rng(3);
    Bytes data = rng.bytes(size_t(state.range(0)));
    for (auto _ : state) {
        Digest d = sha256(std::span<const uint8_t>(data));
        benchmark::DoNotOptimize(d);
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(Sha256Block)->Arg(64)->Arg(4096);

static void SpongePermutation(benchmark::State& state) {
    Rng rng(4);
    FieldElement lanes[3] = {rng.field_element(), rng.field_element(), rng.field_element()};
    for (auto _ : state) {
        sponge_permute(lanes);
        benchmark::DoNotOptimize(lanes[0]);
    }
}
BENCHMARK(SpongePermutation);

static void SpongeHash(benchmark::State& state) {
    Rng rng(5);
    std::vector<FieldElement> inputs;
    for (int64_t i = 0; i < state.range(0); ++i) inputs.push_back(rng.field_element());
    for (auto _ : state) {
        FieldDigest d = sponge_hash(inputs);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(SpongeHash)->Arg(8)->Arg(64)->Arg(512);

static void ScalarMul(benchmark::State& state) {
    Rng rng(6);
    Scalar k = rng.nonzero_scalar();
    for (auto _ : state) {
        CurvePoint p = scalar_mul(k, derive_generator());
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(ScalarMul);

static void SchnorrSign(benchmark::State& state) {
    Rng rng(7);
    KeyPair kp = KeyPair::generate(rng);
    FieldDigest msg = rng.field_element();
    for (auto _ : state) {
        SchnorrSignature sig = schnorr_sign(kp, msg);
        benchmark::DoNotOptimize(sig);
    }
}
BENCHMARK(SchnorrSign);

static void SchnorrVerify(benchmark::State& state) {
    Rng rng(8);
    KeyPair kp = KeyPair::generate(rng);
    FieldDigest msg = rng.field_element();
    SchnorrSignature sig = schnorr_sign(kp, msg);
    for (auto _ : state) {
        bool ok = schnorr_verify(kp.pk, sig, msg);
        benchmark::DoNotOptimize(ok);
    }
}
BENCHMARK(SchnorrVerify);

BENCHMARK_MAIN();
