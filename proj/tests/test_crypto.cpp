#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <set>

#include "epcert/bytes.hpp"
#include "epcert/crypto.hpp"

using namespace epcert;
using namespace epcert::crypto;

TEST_CASE("be64 round trip") {
    for (std::uint64_t v : {0ull, 1ull, 255ull, 256ull, 0x0102030405060708ull,
                            0xffffffffffffffffull}) {
        Bytes b = be64(v);
        CHECK(b.size() == 8);
        CHECK(read_be64(b, 0) == v);
    }
    Bytes two = be64(1);
    Bytes more = be64(2);
    two.insert(two.end(), more.begin(), more.end());
    CHECK(read_be64(two, 8) == 2);
}

TEST_CASE("hex round trip") {
    Bytes b{0x00, 0x0f, 0xf0, 0xff, 0x12};
    CHECK(hex_encode(b) == "000ff0ff12");
    CHECK(hex_decode("000ff0ff12") == b);
    CHECK(hex_encode({}) == "");
}

TEST_CASE("framing is unambiguous") {
    Bytes a = encode_parts({to_bytes("ab"), to_bytes("c")});
    Bytes b = encode_parts({to_bytes("a"), to_bytes("bc")});
    CHECK(a != b);
    CHECK(decode_parts(a) == std::vector<Bytes>{to_bytes("ab"), to_bytes("c")});
    CHECK(decode_parts(b) == std::vector<Bytes>{to_bytes("a"), to_bytes("bc")});
    CHECK(decode_parts(encode_parts({})).empty());
    CHECK(decode_parts(encode_parts({{}})) == std::vector<Bytes>{{}});
}

TEST_CASE("framing rejects malformed input") {
    CHECK_THROWS(decode_parts(Bytes{0x01}));             // truncated length
    Bytes lying = be64(100);                             // length beyond the buffer
    lying.push_back(0x41);
    CHECK_THROWS(decode_parts(lying));
}

TEST_CASE("digest matches frozen vectors") {
    CHECK(digest({to_bytes("ab"), to_bytes("c")}).hex() ==
          "601d5476e2ccfe2c87a2bba7a322659734a05749d5b5aa781f513e4912db0d5f");
    CHECK(digest({to_bytes("a"), to_bytes("bc")}).hex() ==
          "3fafa1cf2f19a7c1129beb20cf0983f73a489a221fc0dd2f16d1be292d089205");
    CHECK(digest({to_bytes("endpoint certification golden vector"), Bytes{0x00, 0x01, 0x02},
                  Bytes{}})
              .hex() == "48f1e408d95ff9f57fda7b2a59a9014704db07557e56d411bba32506d16115d1");
    CHECK_THROWS_AS(digest({}), std::invalid_argument);
}

TEST_CASE("keypair generation is deterministic and seed-sensitive") {
    auto a = generate_keypair(to_bytes("seed-a"));
    auto b = generate_keypair(to_bytes("seed-a"));
    auto c = generate_keypair(to_bytes("seed-b"));
    CHECK(a.public_key == b.public_key);
    CHECK(a.secret_key == b.secret_key);
    CHECK(a.public_key != c.public_key);
    CHECK(a.public_key.size() == kPublicKeySize);
    CHECK(a.secret_key.size() == kSecretKeySize);
    CHECK_THROWS_AS(generate_keypair({}), std::invalid_argument);
}

TEST_CASE("distinct seeds yield distinct keys") {
    std::set<Bytes> keys;
    for (std::uint64_t i = 0; i < 10000; ++i)
        keys.insert(generate_keypair(be64(i)).public_key);
    CHECK(keys.size() == 10000);
}

TEST_CASE("sign and verify") {
    auto kp = generate_keypair(to_bytes("signer"));
    Bytes msg = to_bytes("a message");
    Signature sig = sign(kp.secret_key, msg);
    CHECK(sig.bytes.size() == kSignatureSize);
    CHECK(verify(kp.public_key, msg, sig));
    CHECK(sign(kp.secret_key, msg) == sig);  // deterministic

    SUBCASE("tampered message fails") {
        Bytes other = msg;
        other[0] ^= 1;
        CHECK_FALSE(verify(kp.public_key, other, sig));
    }
    SUBCASE("tampered signature fails") {
        Signature bad = sig;
        bad.bytes[10] ^= 1;
        CHECK_FALSE(verify(kp.public_key, msg, bad));
    }
    SUBCASE("wrong key fails") {
        auto other = generate_keypair(to_bytes("someone else"));
        CHECK_FALSE(verify(other.public_key, msg, sig));
    }
    SUBCASE("malformed inputs are rejected without throwing") {
        CHECK_FALSE(verify(Bytes{1, 2, 3}, msg, sig));
        CHECK_FALSE(verify(kp.public_key, msg, Signature{Bytes{1, 2, 3}}));
        CHECK_FALSE(verify({}, msg, Signature{}));
    }
    SUBCASE("malformed secret key throws") {
        CHECK_THROWS_AS(sign(Bytes{1, 2, 3}, msg), std::invalid_argument);
    }
}

TEST_CASE("signing randomized messages round trips") {
    auto kp = generate_keypair(to_bytes("fuzz"));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Bytes msg(rng() % 300);
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
        Signature sig = sign(kp.secret_key, msg);
        CHECK(verify(kp.public_key, msg, sig));
        if (!msg.empty()) {
            msg[rng() % msg.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
            CHECK_FALSE(verify(kp.public_key, msg, sig));
        }
    }
}

TEST_CASE("index_from_digest matches frozen big-integer values") {
    Digest d = digest({to_bytes("endpoint certification golden vector"), Bytes{0x00, 0x01, 0x02},
                       Bytes{}});
    CHECK(index_from_digest(d, 1) == 0);
    CHECK(index_from_digest(d, 2) == 1);
    CHECK(index_from_digest(d, 97) == 59);
    CHECK(index_from_digest(d, 1000) == 745);
    CHECK(index_from_digest(d, 1000003) == 698616);
    CHECK(index_from_digest(d, 1ull << 63) == 4297319180654417361ull);
    CHECK(index_from_digest(d, 0xffffffffffffffffull) == 9892872979962979615ull);
    CHECK_THROWS_AS(index_from_digest(d, 0), std::invalid_argument);
}

TEST_CASE("index_from_digest agrees with arbitrary-precision reduction") {
    using boost::multiprecision::cpp_int;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        Digest d = digest({be64(rng())});
        cpp_int big = 0;
        for (std::uint8_t b : d.bytes) big = (big << 8) | b;
        std::uint64_t n = 1 + rng() % 0xfffffffffffffull;
        CHECK(index_from_digest(d, n) == (big % n).convert_to<std::uint64_t>());
    }
}

TEST_CASE("index_from_digest is uniform over a prime modulus") {
    const std::uint64_t n = 97;
    const std::uint64_t samples = 100000;
    std::vector<std::uint64_t> counts(n, 0);
    for (std::uint64_t i = 0; i < samples; ++i)
        ++counts[index_from_digest(digest({be64(i)}), n)];
    double expected = static_cast<double>(samples) / static_cast<double>(n);
    double chi2 = 0;
    for (auto c : counts) {
        double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(n - 1));
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
}
