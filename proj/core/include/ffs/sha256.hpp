#pragma once

// FIPS 180-4 SHA-256. Every byte-level hash in the toolkit (commitments,
// circuit ids, audit chaining, round-constant derivation) goes through this.

#include <cstdint>
#include <span>
#include <string>

#include "ffs/bytes.hpp"

namespace ffsuite {

class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    Sha256& update(std::span<const uint8_t> data);
    Sha256& update(const std::string& s) {
        return update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }
    Sha256& update_u32_be(uint32_t v) {
        uint8_t b[4] = {uint8_t(v >> 24), uint8_t(v >> 16), uint8_t(v >> 8), uint8_t(v)};
        return update(std::span<const uint8_t>(b, 4));
    }
    Sha256& update_u64_be(uint64_t v) {
        update_u32_be(uint32_t(v >> 32));
        return update_u32_be(uint32_t(v));
    }
    Digest finalize();

private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t total_len_;
    uint8_t buf_[64];
    size_t buf_len_;
};

inline Digest sha256(std::span<const uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finalize();
}

inline Digest sha256(const std::string& s) {
    Sha256 h;
    h.update(s);
    return h.finalize();
}

}  // namespace ffsuite
