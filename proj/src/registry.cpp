#include "epcert/registry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace epcert::registry {

using channels::EndpointAddress;
using ledger::Ledger;
using ledger::Transaction;
using ledger::TxKind;

std::uint64_t Registry::population_at(std::uint64_t height) const {
    std::uint64_t n = 0;
    for (const auto& s : subjects_)
        if (s.certified_at < height) ++n;
    return n;
}

const CertifiedSubject& Registry::subject(std::uint64_t id) const {
    if (id >= subjects_.size()) throw std::out_of_range("Registry: unknown subject id");
    return subjects_[id];
}

CertifiedSubject& Registry::subject(std::uint64_t id) {
    if (id >= subjects_.size()) throw std::out_of_range("Registry: unknown subject id");
    return subjects_[id];
}

std::optional<std::uint64_t> Registry::find(const Bytes& public_key,
                                            const EndpointAddress& endpoint) const {
    auto it = by_binding_.find({public_key, endpoint});
    if (it == by_binding_.end()) return std::nullopt;
    return it->second;
}

namespace {

struct RequestContext {
    Transaction request;
    wire::CertificationRequest decoded;
    crypto::Digest block_hash;
    std::uint64_t height = 0;
    std::uint64_t population = 0;
    committee::Committee committee;
};

std::optional<RequestContext> load_request(const Registry& reg, const Ledger& chain,
                                           std::uint64_t request_id, std::uint64_t k,
                                           std::string& error) {
    if (!chain.is_committed(request_id)) {
        error = "request not committed";
        return std::nullopt;
    }
    const Transaction& tx = chain.transaction(request_id);
    if (tx.kind != TxKind::CertificationRequest) {
        error = "not a certification request";
        return std::nullopt;
    }
    auto decoded = wire::CertificationRequest::decode(tx.payload);
    if (!decoded) {
        error = "request malformed";
        return std::nullopt;
    }
    if (decoded->public_key != tx.submitter) {
        error = "request signer mismatch";
        return std::nullopt;
    }
    RequestContext ctx;
    ctx.request = tx;
    ctx.decoded = *decoded;
    ctx.height = chain.position_of(request_id).height;
    ctx.block_hash = chain.block_of(request_id).hash;
    ctx.population = reg.population_at(ctx.height);
    if (ctx.population == 0) {
        error = "no certified population";
        return std::nullopt;
    }
    ctx.committee = committee::select(tx.payload, ctx.block_hash, ctx.population, k);
    return ctx;
}

}  // namespace

P3Verification Registry::verify_p3(const Ledger& chain, std::uint64_t request_id) const {
    P3Verification out;
    std::string error;
    auto ctx = load_request(*this, chain, request_id, k_, error);
    if (!ctx) {
        out.error = error;
        return out;
    }
    crypto::Digest q = crypto::digest({ctx->request.payload, ctx->block_hash.as_bytes()});

    // Members (by public key) that published a valid acceptance for this Q.
    std::set<Bytes> accepting;
    for (std::uint64_t tx_id : chain.evidence_for(request_id)) {
        const Transaction& tx = chain.transaction(tx_id);
        if (tx.kind != TxKind::Acceptance) continue;
        if (!chain.happens_after(tx_id, request_id)) continue;
        auto acc = wire::Acceptance::decode(tx.payload);
        if (!acc) continue;
        if (!crypto::verify(ctx->decoded.public_key, q.as_bytes(), acc->proof)) continue;
        if (accepting.insert(tx.submitter).second) out.acceptance_txs.push_back(tx_id);
    }

    // An acceptance covers every slot its member holds; only slots held by
    // committee members count.
    for (std::uint64_t member : ctx->committee.members)
        if (accepting.count(subjects_[member].public_key)) ++out.slots_covered;

    out.certified = out.slots_covered >= k_bar_;
    return out;
}

P4Verification Registry::verify_p4(const Ledger& chain, std::uint64_t request_id) const {
    P4Verification out;
    std::string error;
    auto ctx = load_request(*this, chain, request_id, k_, error);
    if (!ctx) {
        out.failing_step = error;
        return out;
    }

    // Step 2: locate the proof published and signed by p.
    std::optional<wire::Proof> proof;
    for (std::uint64_t tx_id : chain.evidence_for(request_id)) {
        const Transaction& tx = chain.transaction(tx_id);
        if (tx.kind != TxKind::ProofPublication) continue;
        if (tx.submitter != ctx->decoded.public_key) continue;
        auto decoded = wire::Proof::decode(tx.payload);
        if (!decoded) continue;
        proof = decoded;
        out.proof_tx = tx_id;
        break;
    }
    if (!proof) {
        out.failing_step = "proof missing";
        return out;
    }
    if (!crypto::verify(ctx->decoded.public_key,
                        wire::Proof::signing_bytes(proof->entries, ctx->request.payload),
                        proof->signature)) {
        out.failing_step = "proof signature";
        return out;
    }

    // Step 3: each covered slot needs a matching disclosure after P.
    bool saw_order_violation = false;
    std::set<std::uint64_t> seen_slots;
    for (const auto& entry : proof->entries) {
        if (entry.slot < 1 || entry.slot > k_ || !seen_slots.insert(entry.slot).second) {
            out.failing_step = "proof slots malformed";
            return out;
        }
        std::uint64_t expected_member = ctx->committee.members[entry.slot - 1];
        if (entry.member_id != expected_member) {
            out.failing_step = "committee mismatch";
            return out;
        }
        const Bytes& member_key = subjects_[expected_member].public_key;
        for (std::uint64_t tx_id : chain.evidence_for(request_id)) {
            const Transaction& tx = chain.transaction(tx_id);
            if (tx.kind != TxKind::ChallengeDisclosure || tx.submitter != member_key) continue;
            auto disc = wire::Disclosure::decode(tx.payload);
            if (!disc || disc->slot != entry.slot || disc->challenge != entry.challenge) continue;
            if (!chain.happens_after(tx_id, out.proof_tx)) {
                saw_order_violation = true;
                continue;
            }
            out.disclosure_txs.push_back(tx_id);
            ++out.slots_covered;
            break;
        }
    }

    if (out.slots_covered >= k_bar_ && proof->entries.size() >= k_bar_) {
        out.certified = true;
    } else if (proof->entries.size() < k_bar_) {
        out.failing_step = "insufficient challenges";
    } else {
        out.failing_step = saw_order_violation ? "disclosure order" : "disclosure missing";
    }
    return out;
}

std::optional<Certificate> Registry::summarize(Ledger& chain, std::uint64_t request_id,
                                               std::uint8_t protocol, sim::Time now) {
    if (summarized_requests_.count(request_id))
        throw std::invalid_argument("Registry::summarize: request already certified");

    Certificate cert;
    cert.request_id = request_id;
    cert.protocol = protocol;
    if (protocol == 3) {
        auto v = verify_p3(chain, request_id);
        if (!v.certified) return std::nullopt;
        cert.supporting_txs = v.acceptance_txs;
    } else if (protocol == 4) {
        auto v = verify_p4(chain, request_id);
        if (!v.certified) return std::nullopt;
        cert.proof_tx = v.proof_tx;
        cert.supporting_txs = v.disclosure_txs;
    } else {
        throw std::invalid_argument("Registry::summarize: unknown protocol");
    }

    auto decoded = wire::CertificationRequest::decode(chain.transaction(request_id).payload);
    if (find(decoded->public_key, decoded->endpoint))
        throw std::invalid_argument("Registry::summarize: binding already certified");

    auto tx = ledger::make_transaction(consensus_keypair(), TxKind::Summarization,
                                       wire::DerivedSummarization{request_id, protocol}.encode());
    auto tx_id = chain.submit(std::move(tx), now);
    cert.summarization_tx = *tx_id;
    cert.assigned_id = population();
    return cert;
}

void Registry::apply_block(const Ledger& chain, const ledger::Block& block) {
    for (const auto& tx : block.transactions) {
        if (tx.kind != TxKind::Summarization) continue;
        if (auto derived = wire::DerivedSummarization::decode(tx.payload)) {
            if (tx.submitter != consensus_keypair().public_key) continue;
            if (summarized_requests_.count(derived->request_id)) continue;
            bool ok = derived->protocol == 3 ? verify_p3(chain, derived->request_id).certified
                                             : verify_p4(chain, derived->request_id).certified;
            if (!ok) continue;
            auto decoded =
                wire::CertificationRequest::decode(chain.transaction(derived->request_id).payload);
            if (find(decoded->public_key, decoded->endpoint)) continue;
            summarized_requests_[derived->request_id] = subjects_.size();
            add_subject(decoded->public_key, decoded->endpoint, block.height);
        } else if (auto boot = wire::BootstrapSummarization::decode(tx.payload)) {
            // Genesis window only: the initial population the protocols assume.
            if (block.height > 1) continue;
            if (tx.submitter != boot->public_key) continue;
            if (find(boot->public_key, boot->endpoint)) continue;
            add_subject(boot->public_key, boot->endpoint, block.height);
        }
    }
}

void Registry::add_subject(const Bytes& public_key, const EndpointAddress& endpoint,
                           std::uint64_t height) {
    CertifiedSubject s;
    s.id = subjects_.size();
    s.public_key = public_key;
    s.endpoint = endpoint;
    s.certified_at = height;
    by_binding_[{public_key, endpoint}] = s.id;
    subjects_.push_back(std::move(s));
}

Registry Registry::rebuild(const Ledger& chain, std::uint64_t committee_size,
                           std::uint64_t threshold) {
    Registry reg(committee_size, threshold);
    for (const auto& block : chain.blocks()) reg.apply_block(chain, block);
    return reg;
}

bool Registry::same_subjects(const Registry& other) const {
    if (subjects_.size() != other.subjects_.size()) return false;
    for (std::size_t i = 0; i < subjects_.size(); ++i) {
        const auto& a = subjects_[i];
        const auto& b = other.subjects_[i];
        if (a.id != b.id || a.public_key != b.public_key || a.endpoint != b.endpoint ||
            a.certified_at != b.certified_at)
            return false;
    }
    return true;
}

void Registry::export_table(std::ostream& os) const {
    for (const auto& s : subjects_)
        os << s.id << ' ' << hex_encode(s.public_key) << ' ' << s.endpoint.address << ' '
           << s.certified_at << '\n';
}

crypto::KeyPair Registry::consensus_keypair() {
    static const crypto::KeyPair kp = crypto::generate_keypair(to_bytes("epcert.consensus"));
    return kp;
}

}  // namespace epcert::registry
