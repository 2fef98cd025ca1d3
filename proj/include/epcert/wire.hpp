#ifndef EPCERT_WIRE_HPP
#define EPCERT_WIRE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "epcert/bytes.hpp"
#include "epcert/channels.hpp"
#include "epcert/crypto.hpp"

// Transaction payload and channel message encodings. Every evidence payload
// opens with a framed be64 request-transaction id so evidence for different
// requests is never confusable.

namespace epcert::wire {

struct CertificationRequest {
    Bytes public_key;                    // p
    channels::EndpointAddress endpoint;  // E

    Bytes encode() const;  // R: the bytes committee selection and Q hash over
    static std::optional<CertificationRequest> decode(const Bytes& payload);
};

struct Acceptance {
    std::uint64_t request_id = 0;
    crypto::Signature proof;  // P = [Q]_S

    Bytes encode() const;
    static std::optional<Acceptance> decode(const Bytes& payload);
};

struct ProofEntry {
    std::uint64_t slot = 0;       // 1-based committee slot
    std::uint64_t member_id = 0;  // subject at that slot
    Bytes challenge;              // Q_i
};

struct Proof {
    std::uint64_t request_id = 0;
    std::vector<ProofEntry> entries;  // sorted by slot
    crypto::Signature signature;      // [entries|R]_S

    static Bytes body_bytes(const std::vector<ProofEntry>& entries);
    // The bytes the subject signs: frame(body, R).
    static Bytes signing_bytes(const std::vector<ProofEntry>& entries, const Bytes& request);

    Bytes encode() const;
    static std::optional<Proof> decode(const Bytes& payload);
};

struct Disclosure {
    std::uint64_t request_id = 0;
    std::uint64_t slot = 0;
    Bytes challenge;  // Q_i

    Bytes encode() const;
    static std::optional<Disclosure> decode(const Bytes& payload);
};

// Two summarization forms: genesis bootstrap (direct binding) and derived
// (points at a verified request).
struct BootstrapSummarization {
    Bytes public_key;
    channels::EndpointAddress endpoint;

    Bytes encode() const;
    static std::optional<BootstrapSummarization> decode(const Bytes& payload);
};

struct DerivedSummarization {
    std::uint64_t request_id = 0;
    std::uint8_t protocol = 3;  // 3 or 4

    Bytes encode() const;
    static std::optional<DerivedSummarization> decode(const Bytes& payload);
};

// Channel payloads.
struct P3ProofMessage {
    std::uint64_t request_id = 0;
    crypto::Signature proof;

    Bytes encode() const;
    static std::optional<P3ProofMessage> decode(const Bytes& payload);
};

struct P4ChallengeMessage {
    std::uint64_t request_id = 0;
    std::uint64_t slot = 0;
    std::uint64_t member_id = 0;
    Bytes challenge;

    Bytes encode() const;
    static std::optional<P4ChallengeMessage> decode(const Bytes& payload);
};

}  // namespace epcert::wire

#endif
