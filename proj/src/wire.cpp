#include "epcert/wire.hpp"

#include <stdexcept>

namespace epcert::wire {

namespace {

// decode_parts that reports malformed input as nullopt instead of throwing.
std::optional<std::vector<Bytes>> try_parts(const Bytes& payload) {
    try {
        return decode_parts(payload);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<std::uint64_t> as_u64(const Bytes& part) {
    if (part.size() != 8) return std::nullopt;
    return read_be64(part, 0);
}

}  // namespace

Bytes CertificationRequest::encode() const {
    return encode_parts({public_key, Bytes{static_cast<std::uint8_t>(endpoint.kind)},
                         to_bytes(endpoint.address)});
}

std::optional<CertificationRequest> CertificationRequest::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 3 || (*parts)[0].size() != crypto::kPublicKeySize ||
        (*parts)[1].size() != 1)
        return std::nullopt;
    try {
        return CertificationRequest{(*parts)[0],
                                    channels::EndpointAddress::decode((*parts)[1][0], (*parts)[2])};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Bytes Acceptance::encode() const { return encode_parts({be64(request_id), proof.bytes}); }

std::optional<Acceptance> Acceptance::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 2) return std::nullopt;
    auto id = as_u64((*parts)[0]);
    if (!id || (*parts)[1].size() != crypto::kSignatureSize) return std::nullopt;
    return Acceptance{*id, crypto::Signature{(*parts)[1]}};
}

Bytes Proof::body_bytes(const std::vector<ProofEntry>& entries) {
    std::vector<Bytes> parts;
    parts.reserve(entries.size());
    for (const auto& e : entries)
        parts.push_back(encode_parts({be64(e.slot), be64(e.member_id), e.challenge}));
    return encode_parts(parts);
}

Bytes Proof::signing_bytes(const std::vector<ProofEntry>& entries, const Bytes& request) {
    return encode_parts({body_bytes(entries), request});
}

Bytes Proof::encode() const {
    return encode_parts({be64(request_id), body_bytes(entries), signature.bytes});
}

std::optional<Proof> Proof::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 3) return std::nullopt;
    auto id = as_u64((*parts)[0]);
    if (!id || (*parts)[2].size() != crypto::kSignatureSize) return std::nullopt;
    auto entry_parts = try_parts((*parts)[1]);
    if (!entry_parts) return std::nullopt;
    Proof p;
    p.request_id = *id;
    p.signature.bytes = (*parts)[2];
    for (const auto& ep : *entry_parts) {
        auto fields = try_parts(ep);
        if (!fields || fields->size() != 3) return std::nullopt;
        auto slot = as_u64((*fields)[0]);
        auto member = as_u64((*fields)[1]);
        if (!slot || !member) return std::nullopt;
        p.entries.push_back(ProofEntry{*slot, *member, (*fields)[2]});
    }
    return p;
}

Bytes Disclosure::encode() const {
    return encode_parts({be64(request_id), be64(slot), challenge});
}

std::optional<Disclosure> Disclosure::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 3) return std::nullopt;
    auto id = as_u64((*parts)[0]);
    auto slot = as_u64((*parts)[1]);
    if (!id || !slot) return std::nullopt;
    return Disclosure{*id, *slot, (*parts)[2]};
}

Bytes BootstrapSummarization::encode() const {
    return encode_parts({public_key, Bytes{static_cast<std::uint8_t>(endpoint.kind)},
                         to_bytes(endpoint.address)});
}

std::optional<BootstrapSummarization> BootstrapSummarization::decode(const Bytes& payload) {
    auto req = CertificationRequest::decode(payload);
    if (!req) return std::nullopt;
    return BootstrapSummarization{req->public_key, req->endpoint};
}

Bytes DerivedSummarization::encode() const {
    return encode_parts({be64(request_id), Bytes{protocol}});
}

std::optional<DerivedSummarization> DerivedSummarization::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 2 || (*parts)[1].size() != 1) return std::nullopt;
    auto id = as_u64((*parts)[0]);
    if (!id) return std::nullopt;
    return DerivedSummarization{*id, (*parts)[1][0]};
}

Bytes P3ProofMessage::encode() const { return encode_parts({be64(request_id), proof.bytes}); }

std::optional<P3ProofMessage> P3ProofMessage::decode(const Bytes& payload) {
    auto a = Acceptance::decode(payload);
    if (!a) return std::nullopt;
    return P3ProofMessage{a->request_id, a->proof};
}

Bytes P4ChallengeMessage::encode() const {
    return encode_parts({be64(request_id), be64(slot), be64(member_id), challenge});
}

std::optional<P4ChallengeMessage> P4ChallengeMessage::decode(const Bytes& payload) {
    auto parts = try_parts(payload);
    if (!parts || parts->size() != 4) return std::nullopt;
    auto id = as_u64((*parts)[0]);
    auto slot = as_u64((*parts)[1]);
    auto member = as_u64((*parts)[2]);
    if (!id || !slot || !member) return std::nullopt;
    return P4ChallengeMessage{*id, *slot, *member, (*parts)[3]};
}

}  // namespace epcert::wire
