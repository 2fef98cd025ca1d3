#ifndef EPCERT_CRYPTO_HPP
#define EPCERT_CRYPTO_HPP

#include <array>
#include <cstdint>

#include "epcert/bytes.hpp"

namespace epcert::crypto {

inline constexpr std::size_t kDigestSize = 32;     // SHA-256
inline constexpr std::size_t kPublicKeySize = 32;  // Ed25519
inline constexpr std::size_t kSecretKeySize = 64;
inline constexpr std::size_t kSignatureSize = 64;

struct Signature {
    Bytes bytes;
    bool operator==(const Signature&) const = default;
};

struct Digest {
    std::array<std::uint8_t, kDigestSize> bytes{};
    bool operator==(const Digest&) const = default;
    Bytes as_bytes() const { return Bytes(bytes.begin(), bytes.end()); }
    std::string hex() const { return hex_encode(as_bytes()); }
};

struct KeyPair {
    Bytes public_key;  // p
    Bytes secret_key;  // s
};

// Deterministic: the same seed always yields the same pair.
KeyPair generate_keypair(const Bytes& seed);

// Ed25519 detached signature over the raw message bytes. Throws
// std::invalid_argument on a malformed secret key.
Signature sign(const Bytes& secret_key, const Bytes& message);

// True iff sig was produced over message by the secret key matching
// public_key. Malformed inputs return false, never throw.
bool verify(const Bytes& public_key, const Bytes& message, const Signature& sig);

// SHA-256 over the length-prefixed framing of the parts, so the part
// boundaries are part of the input: digest({"ab","c"}) != digest({"a","bc"}).
Digest digest(const std::vector<Bytes>& parts);

// Interprets the digest as a big-endian unsigned integer and reduces mod n.
// Throws std::invalid_argument when n == 0.
std::uint64_t index_from_digest(const Digest& d, std::uint64_t n);

}  // namespace epcert::crypto

#endif
