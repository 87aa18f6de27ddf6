#pragma once

// Scalability harness: for each requested element count N, builds a random
// 16-bit matrix/vector average_dot_products statement, compiles it, proves
// and verifies, and reports gate counts, times, and proof sizes.

#include <cstdint>
#include <string>
#include <vector>

namespace ffsuite {

struct BenchRow {
    size_t n = 0;           // total data elements
    size_t gates = 0;       // multiplication gates
    uint32_t t = 0;         // repetitions
    double prove_ms = 0;
    double verify_ms = 0;
    size_t proof_bytes = 0;
};

/// Deterministic for a fixed seed: identical gate counts and proof sizes.
std::vector<BenchRow> run_bench(const std::vector<size_t>& sizes, uint32_t kappa, uint64_t seed,
                                unsigned threads = 1);

/// Comma-separated report with a one-line header.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Plot-ready whitespace table (# n prove_ms verify_ms).
std::string bench_plot(const std::vector<BenchRow>& rows);

}  // namespace ffsuite
