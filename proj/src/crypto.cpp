#include "epcert/crypto.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace epcert::crypto {

namespace {

void ensure_sodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
    });
}

}  // namespace

KeyPair generate_keypair(const Bytes& seed) {
    ensure_sodium();
    if (seed.empty()) throw std::invalid_argument("generate_keypair: empty seed");
    // Stretch the caller seed to the fixed-size scheme seed.
    Digest d = digest({to_bytes("epcert.keygen"), seed});
    KeyPair kp;
    kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
    static_assert(crypto_sign_SEEDBYTES == kDigestSize);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), d.bytes.data());
    return kp;
}

Signature sign(const Bytes& secret_key, const Bytes& message) {
    ensure_sodium();
    if (secret_key.size() != kSecretKeySize)
        throw std::invalid_argument("sign: malformed secret key");
    Signature sig;
    sig.bytes.resize(crypto_sign_BYTES);
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                         secret_key.data());
    return sig;
}

bool verify(const Bytes& public_key, const Bytes& message, const Signature& sig) {
    ensure_sodium();
    if (public_key.size() != kPublicKeySize || sig.bytes.size() != kSignatureSize) return false;
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                       public_key.data()) == 0;
}

Digest digest(const std::vector<Bytes>& parts) {
    ensure_sodium();
    if (parts.empty()) throw std::invalid_argument("digest: empty part list");
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    for (const auto& p : parts) {
        Bytes len = be64(p.size());
        crypto_hash_sha256_update(&st, len.data(), len.size());
        crypto_hash_sha256_update(&st, p.data(), p.size());
    }
    Digest d;
    crypto_hash_sha256_final(&st, d.bytes.data());
    return d;
}

std::uint64_t index_from_digest(const Digest& d, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("index_from_digest: n must be >= 1");
    // Big-endian modular reduction, exact for any n that fits in 64 bits.
    std::uint64_t r = 0;
    for (std::uint8_t b : d.bytes) {
        unsigned __int128 acc = (static_cast<unsigned __int128>(r) << 8) | b;
        r = static_cast<std::uint64_t>(acc % n);
    }
    return r;
}

}  // namespace epcert::crypto
