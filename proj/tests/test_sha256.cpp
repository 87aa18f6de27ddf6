#include <doctest.h>

#include "ffs/rng.hpp"
#include "ffs/sha256.hpp"
#include "oracle.hpp"

using namespace ffsuite;

TEST_CASE("FIPS 180-4 known answers") {
    CHECK(to_hex(sha256(std::string("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha256(std::string(""))) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(sha256(std::string("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    CHECK(to_hex(sha256(std::string(1000000, 'a'))) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("agrees with the OpenSSL reference on random inputs and lengths") {
    Rng rng(0x5a);
    for (int i = 0; i < 200; ++i) {
        Bytes data = rng.bytes(rng.below(300));
        CHECK(sha256(std::span<const uint8_t>(data)) ==
              oracle::openssl_sha256(std::span<const uint8_t>(data)));
    }
}

TEST_CASE("streaming equals one-shot across split points") {
    Rng rng(0x5b);
    Bytes data = rng.bytes(257);
    Digest oneshot = sha256(std::span<const uint8_t>(data));
    for (size_t split = 0; split <= data.size(); split += 13) {
        Sha256 h;
        h.update(std::span<const uint8_t>(data.data(), split));
        h.update(std::span<const uint8_t>(data.data() + split, data.size() - split));
        CHECK(h.finalize() == oneshot);
    }
}

TEST_CASE("determinism") {
    Bytes data{1, 2, 3};
    CHECK(sha256(std::span<const uint8_t>(data)) == sha256(std::span<const uint8_t>(data)));
}
